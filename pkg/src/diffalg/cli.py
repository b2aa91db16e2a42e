"""Command-line interface.

Exit codes: 0 success, 1 verification failure or singular evaluation,
2 usage or parse error.  ``--style`` defaults to ``$DIFFALG_STYLE`` or plain.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .differential import UndefinedDifferential, nth_differential
from .expansion import (
    Progression, arbogast_expand, reduce_with_progression, verify_dxdx_subtlety,
    verify_second_chain_rule,
)
from .expr import DomainError, Sym, free_atoms, free_symbols
from .jet import (
    DenominatorVanishes, InconclusiveSampling, Parametrization, UnboundSymbol, eval_diff_expr,
)
from .ode import BlowupDetected, UnivariatePoly, ZeroInitialSlope, verify_numeric
from .parser import ParseError, format_expr, parse
from .rational import DiffRational
from .univariate import NotAPolynomial
from .verify import expansion_oracle_check, verify_inverse

STYLES = ("plain", "latex", "json")
DEFAULT_SEED = 20240601


class UsageError(Exception):
    pass


def _style_default() -> str:
    style = os.environ.get("DIFFALG_STYLE", "plain").strip().lower()
    return style if style in STYLES else "plain"


def _expr(text: str, differentiate: bool = False):
    return parse(text, differentiate=differentiate)


def _symbol(name: str) -> Sym:
    try:
        return Sym(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _fmt(e, style):
    if isinstance(e, DiffRational):
        e = e.to_expr()
    return format_expr(e, "latex" if style == "latex" else "plain")


def _emit(out, payload: dict, lines: list[str], style: str):
    if style == "json":
        print(json.dumps(payload, sort_keys=True), file=out)
    else:
        for line in lines:
            print(line, file=out)


# -- subcommands -------------------------------------------------------------


def cmd_diff(args, out) -> int:
    if args.n < 1:
        raise UsageError("-n must be >= 1")
    e = _expr(args.expr, differentiate=True)
    r = nth_differential(e, args.n)
    payload = {"input": args.expr, "order": args.n, "result": format_expr(r),
               "latex": format_expr(r, "latex")}
    _emit(out, payload, [_fmt(r, args.style)], args.style)
    return 0


def cmd_expand(args, out) -> int:
    dep, indep = _symbol(args.dependent), _symbol(args.independent)
    if dep == indep:
        raise UsageError("dependent and independent variables must differ")
    if args.n < 1:
        raise UsageError("-n must be >= 1")
    form = arbogast_expand(dep, indep, args.n)
    r = form.expansion
    prog = None
    if args.progression:
        prog = _symbol(args.progression)
        r = reduce_with_progression(r, Progression(prog))
    payload = {
        "dependent": dep.name, "independent": indep.name, "order": args.n,
        "progression": prog.name if prog else None,
        "result": _fmt(r, "plain"), "latex": _fmt(r, "latex"),
        "numerator": format_expr(r.num.to_expr()), "denominator": format_expr(r.den.to_expr()),
    }
    _emit(out, payload, [_fmt(r, args.style)], args.style)
    return 0


def _verify_chain2(args, out) -> int:
    y, x = _expr(args.y), _expr(args.x)
    if free_atoms(y) or free_atoms(x):
        raise UsageError("--y and --x must not contain differentials")
    if not free_symbols(y) <= {Sym("x")}:
        raise UsageError("--y must be a function of x")
    if not free_symbols(x) <= {Sym("t")}:
        raise UsageError("--x must be a function of t")
    r = verify_second_chain_rule(y, x)
    s = args.style
    lines = [
        f"y = {_fmt(y, s)}, x = {_fmt(x, s)}",
        f"naive (D_x^2 y)(dx/dt)^2: {_fmt(r.naive, s)}",
        f"Faa di Bruno:             {_fmt(r.faa_di_bruno, s)}",
        f"direct D_t^2 y:           {_fmt(r.direct, s)}",
        f"naive differs from direct: {'yes' if r.naive_differs else 'no'}",
        f"full-form identity holds: {'yes' if r.full_form_identity else 'NO'}",
        f"variant with (dy/dt)(d^2x/dx^2) on the left holds: "
        f"{'yes' if r.printed_form_identity else 'no'}",
    ]
    _emit(out, r.to_dict(), lines, s)
    return 0 if r.passed else 1


def _verify_inverse(args, out) -> int:
    y = _expr(args.y)
    if free_atoms(y) or not free_symbols(y) <= {Sym("x")}:
        raise UsageError("--y must be a function of x")
    r = verify_inverse(y)
    lines = [
        f"y = {r.y_of_x}",
        f"D_x y = {r.first}",
        f"D_x^2 y = {r.second}",
        f"D_y^2 x = -D_x^2 y (D_x y)^-3 = {r.inverted}",
        f"general identity holds: {'yes' if r.general_identity else 'NO'}",
    ]
    if r.numeric_max_rel_err is not None:
        lines.append(f"oracle max rel. err: {r.numeric_max_rel_err:.3e}")
    _emit(out, r.to_dict(), lines, args.style)
    return 0 if r.passed else 1


def _verify_dxdx(args, out) -> int:
    v = _symbol(args.var).name
    r = verify_dxdx_subtlety(v)
    lines = [
        f"d(d{v}/d{v})/d{v} in full form = {r.full_form}",
        f"bare ratio d^2{v}/d{v}^2 = {r.bare_ratio} "
        f"({'zero' if r.bare_ratio_is_zero else 'not zero'})",
    ]
    _emit(out, r.to_dict(), lines, args.style)
    return 0 if r.passed else 1


def _verify_oracle(args, out) -> int:
    if args.n < 1 or args.trials < 1:
        raise UsageError("-n and --trials must be >= 1")
    r = expansion_oracle_check(args.n, args.trials, args.seed, args.tolerance)
    lines = [f"{r.identity}: {r.trials} trials, max rel. err {r.max_rel_err:.3e} "
             f"(tolerance {r.tolerance:g})"]
    if r.counterexample:
        lines.append("counterexample: " + json.dumps(r.counterexample, sort_keys=True))
    _emit(out, r.to_dict(), lines, args.style)
    return 0 if r.passed else 1


def cmd_verify(args, out) -> int:
    return {
        "chain2": _verify_chain2,
        "inverse": _verify_inverse,
        "dxdx": _verify_dxdx,
        "expansion-oracle": _verify_oracle,
    }[args.which](args, out)


def cmd_solve_ode(args, out) -> int:
    try:
        f = UnivariatePoly.from_expr(_expr(args.f), "y")
    except NotAPolynomial as exc:
        raise UsageError(f"--f must be a polynomial in y ({exc})") from None
    r = verify_numeric(f, args.y0, args.yprime0, args.x0, args.span, args.step, args.tolerance)
    mb, pb = r.constants["minus_branch"], r.constants["plus_branch"]
    lines = [
        f"y'' = f(y) (y')^3 with f(y) = {r.f}",
        f"D_y^2 x = -f(y)  =>  {r.solution}",
        f"c1 = {mb['c1']:.12g}, c2 = {mb['c2']:.12g}",
        f"max residual, derived branch:  {r.max_residual_minus_branch:.3e}",
        f"max residual, opposite branch: {r.max_residual_plus_branch:.3e} "
        f"(c1 = {pb['c1']:.12g}, c2 = {pb['c2']:.12g})",
        f"step {r.step:g}, span {r.span:g}: {'ok' if r.passed else 'FAILED'}",
    ]
    _emit(out, r.to_dict(), lines, args.style)
    return 0 if r.passed else 1


def cmd_eval(args, out) -> int:
    e = _expr(args.expr, differentiate=True)
    try:
        p = Parametrization.parse(args.param, t0=args.at, dt_value=args.dt)
    except (ValueError, ParseError, NotAPolynomial) as exc:
        raise UsageError(f"bad --param: {exc}") from None
    value = eval_diff_expr(e, p)
    payload = {"input": args.expr, "parametrization": p.to_dict(), "value": value}
    _emit(out, payload, [f"{value:.15g}"], args.style)
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--style", choices=STYLES, default=_style_default(),
                        help="output style (default: $DIFFALG_STYLE or plain)")

    ap = argparse.ArgumentParser(prog="diffalg", parents=[common],
                                 description="Algebra of differentials.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diff", parents=[common], help="n-th differential of an expression")
    p.add_argument("expr")
    p.add_argument("-n", type=int, default=1)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("expand", parents=[common], help="D_x^n y in differentials")
    p.add_argument("-d", "--dependent", required=True)
    p.add_argument("-i", "--independent", required=True)
    p.add_argument("-n", type=int, default=2)
    p.add_argument("--progression", help="variable whose d^2 and higher vanish")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("verify", parents=[common], help="run a verification")
    p.add_argument("which", choices=("chain2", "inverse", "dxdx", "expansion-oracle"))
    p.add_argument("--y", default=None, help="y as a function of x")
    p.add_argument("--x", default="t^2", help="x as a function of t (chain2)")
    p.add_argument("--var", default="x", help="variable for dxdx")
    p.add_argument("-n", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve-ode", parents=[common], help="y'' = f(y) (y')^3 by swapping")
    p.add_argument("--f", required=True, help="polynomial in y")
    p.add_argument("--y0", type=float, default=1.0)
    p.add_argument("--yprime0", type=float, default=1.0)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--span", type=float, default=0.5)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.set_defaults(func=cmd_solve_ode)

    p = sub.add_parser("eval", parents=[common], help="evaluate along a polynomial curve")
    p.add_argument("expr")
    p.add_argument("--param", required=True, help='e.g. "x=t^2,y=t^6"')
    p.add_argument("--at", type=float, default=0.0, help="t0")
    p.add_argument("--dt", type=float, default=1.0, help="value of dt")
    p.set_defaults(func=cmd_eval)
    return ap


def _fail(kind: str, message: str, style: str, span=None) -> None:
    if style == "json":
        print(json.dumps({"error": kind, "message": message, "span": span}, sort_keys=True),
              file=sys.stderr)
    else:
        print(f"error: {message}", file=sys.stderr)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.command == "verify" and args.y is None:
        args.y = "x^3"
    style = args.style
    try:
        return args.func(args, out)
    except ParseError as exc:
        _fail(type(exc).__name__, str(exc), style, [exc.span.start, exc.span.end])
        return 2
    except (UsageError, UnboundSymbol, UndefinedDifferential, DomainError, ZeroInitialSlope) as exc:
        _fail(type(exc).__name__, str(exc), style)
        return 2
    except (DenominatorVanishes, BlowupDetected, InconclusiveSampling, ZeroDivisionError) as exc:
        _fail(type(exc).__name__, str(exc), style)
        return 1


if __name__ == "__main__":
    sys.exit(main())
