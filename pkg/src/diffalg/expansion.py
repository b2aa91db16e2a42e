"""Higher derivatives written out in differentials.

``D_x^n y`` is defined by the recurrence ``D_x^(n+1) y = d(D_x^n y) / dx``
starting from ``dy/dx``; nothing about the independent variable is assumed,
so ``d^2x`` and friends stay in the result.  A ``Progression`` is the
opposite choice: it declares one variable independent and drops its higher
differentials.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Union

from .differential import differentiate
from .expr import Atom, Const, Expr, Sym, free_atoms, free_symbols, normalize, substitute
from .rational import DiffPolynomial, DiffRational, DivisionByZeroPolynomial, from_expr

__all__ = [
    "DerivativeForm", "Progression", "PatternNotFound",
    "differential_of", "arbogast_expand", "derivative_of", "reduce_with_progression",
    "reinflate_second", "invert_second_derivative", "substitute_rational",
    "ChainRuleReport", "chain_rule_sides", "verify_second_chain_rule", "DxdxReport", "verify_dxdx_subtlety",
]


class PatternNotFound(ValueError):
    pass


def _sym(s: Union[str, Sym]) -> Sym:
    return s if isinstance(s, Sym) else Sym(s)


def _poly_differential(p: DiffPolynomial) -> DiffRational:
    return from_expr(differentiate(p.to_expr()))


def differential_of(r: DiffRational) -> DiffRational:
    """d(N/D) = (D dN - N dD) / D^2."""
    if r.den.is_constant():
        return _poly_differential(r.num) / DiffRational(r.den)
    dn = _poly_differential(r.num)
    dd = _poly_differential(r.den)
    n, d = DiffRational(r.num), DiffRational(r.den)
    return (dn * d - n * dd) / (d * d)


def _iterate(start: DiffRational, indep: Sym, n: int) -> DiffRational:
    dx = from_expr(Atom(indep.name, 1))
    r = start
    for _ in range(n):
        r = differential_of(r) / dx
    return r


@dataclass(frozen=True)
class DerivativeForm:
    dependent: Sym
    independent: Sym
    order: int
    expansion: DiffRational = field(compare=False)

    def to_expr(self) -> Expr:
        return self.expansion.to_expr()

    def __str__(self):
        return str(self.to_expr())


def arbogast_expand(dependent, independent, n: int) -> DerivativeForm:
    """D_x^n y as a reduced ratio of differential polynomials.

    ``dependent == independent`` is allowed; the result is then the derivative
    of dx/dx, which is 1 for n = 0 and 0 beyond.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError("n must be an integer >= 1")
    y, x = _sym(dependent), _sym(independent)
    first = from_expr(Atom(y.name, 1)) / from_expr(Atom(x.name, 1))
    return DerivativeForm(y, x, n, _iterate(first, x, n - 1))


def derivative_of(f: Expr, var, n: int = 1) -> DiffRational:
    """D_var^n of an explicit expression, e.g. ``x^3 -> 6x`` for n = 2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _iterate(from_expr(f), _sym(var), n)


@dataclass(frozen=True)
class Progression:
    """Take ``independent`` as the progression: its d^2 and higher vanish."""

    independent: Sym

    def __post_init__(self):
        object.__setattr__(self, "independent", _sym(self.independent))

    def kills(self, a: Atom) -> bool:
        return a.base == self.independent.name and a.order >= 2


def _progression_table(atoms, p: Progression) -> dict:
    return {a: Const(0) for a in atoms if p.kills(a)}


def reduce_with_progression(e, p: Progression):
    """Drop ``d^k`` (k >= 2) of the progression variable and renormalize."""
    if not isinstance(p, Progression):
        p = Progression(p)
    if isinstance(e, DiffRational):
        def image(g):
            table = _progression_table(free_atoms(g), p)
            return substitute(g, table) if table else None
        return e.map_generators(image)
    e = normalize(e)
    table = _progression_table(free_atoms(e), p)
    return substitute(e, table) if table else e


def reinflate_second(e: Expr, dependent, independent) -> Expr:
    """Replace d^2y/dx^2 by its full form d^2y/dx^2 - (dy/dx)(d^2x/dx^2).

    Done by the atom substitution ``d^2y -> d^2y - dy d^2x / dx``, which is the
    same thing wherever d^2y sits over dx^2.
    """
    y, x = _sym(dependent), _sym(independent)
    e = normalize(e)
    d2y = Atom(y.name, 2)
    if d2y not in free_atoms(e):
        raise PatternNotFound(f"no d^2{y.name}/d{x.name}^2 in {e}")
    full = normalize(d2y - Atom(y.name, 1) * Atom(x.name, 2) / Atom(x.name, 1))
    return substitute(e, {d2y: full})


def invert_second_derivative(d2, d1) -> DiffRational:
    """D_y^2 x = -D_x^2 y / (D_x y)^3."""
    d2 = DiffRational._lift(d2)
    d1 = DiffRational._lift(d1)
    if d1.is_zero():
        raise DivisionByZeroPolynomial("first derivative is zero")
    return -d2 * d1 ** -3


def substitute_rational(r: DiffRational, bindings: Mapping) -> DiffRational:
    """Substitute symbols inside a rational; differentials stay opaque."""
    names = {(k.name if isinstance(k, Sym) else k) for k in bindings}

    def image(g):
        if any(s.name in names for s in free_symbols(g)):
            return substitute(g, bindings)
        return None

    return r.map_generators(image)


@dataclass
class ChainRuleReport:
    y_of_x: str
    x_of_t: str
    naive: DiffRational
    faa_di_bruno: DiffRational
    direct: DiffRational
    full_form_identity: bool
    printed_form_identity: bool

    @property
    def naive_differs(self) -> bool:
        return self.naive != self.direct

    @property
    def passed(self) -> bool:
        return self.faa_di_bruno == self.direct and self.full_form_identity

    def to_dict(self) -> dict:
        return {
            "y_of_x": self.y_of_x,
            "x_of_t": self.x_of_t,
            "naive": str(self.naive),
            "faa_di_bruno": str(self.faa_di_bruno),
            "direct": str(self.direct),
            "naive_differs_from_direct": self.naive_differs,
            "full_form_identity_holds": self.full_form_identity,
            "printed_form_identity_holds": self.printed_form_identity,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def chain_rule_sides(y="y", x="x", t="t") -> dict:
    """Both sides of the second-order chain rule with every derivative in full
    form, plus the variant whose left side subtracts (dy/dt)(d^2x/dx^2)."""
    Dyx2 = arbogast_expand(y, x, 2).expansion
    Dyx1 = arbogast_expand(y, x, 1).expansion
    Dxt1 = arbogast_expand(x, t, 1).expansion
    Dxt2 = arbogast_expand(x, t, 2).expansion
    rhs = Dyx2 * Dxt1 ** 2 + Dyx1 * Dxt2
    dt, dy = from_expr(Atom(_sym(t).name, 1)), from_expr(Atom(_sym(y).name, 1))
    d2y = from_expr(Atom(_sym(y).name, 2))
    d2x, dx = from_expr(Atom(_sym(x).name, 2)), from_expr(Atom(_sym(x).name, 1))
    printed_lhs = d2y / dt ** 2 - (dy / dt) * (d2x / dx ** 2)
    return {"lhs": arbogast_expand(y, t, 2).expansion, "rhs": rhs, "printed_lhs": printed_lhs}


def verify_second_chain_rule(y_of_x: Expr, x_of_t: Expr, x="x", t="t") -> ChainRuleReport:
    x, t = _sym(x), _sym(t)
    bind = {x: x_of_t}
    Dyx1 = substitute_rational(derivative_of(y_of_x, x, 1), bind)
    Dyx2 = substitute_rational(derivative_of(y_of_x, x, 2), bind)
    Dxt1 = derivative_of(x_of_t, t, 1)
    Dxt2 = derivative_of(x_of_t, t, 2)
    naive = Dyx2 * Dxt1 ** 2
    faa = Dyx2 * Dxt1 ** 2 + Dyx1 * Dxt2
    direct = derivative_of(substitute(y_of_x, bind), t, 2)
    sides = chain_rule_sides("y", x, t) if x.name != "y" and t.name != "y" else \
        chain_rule_sides("u", x, t)
    return ChainRuleReport(
        str(normalize(y_of_x)), str(normalize(x_of_t)), naive, faa, direct,
        sides["lhs"] == sides["rhs"], sides["printed_lhs"] == sides["rhs"])


@dataclass
class DxdxReport:
    variable: str
    full_form: DiffRational
    bare_ratio: DiffRational

    @property
    def full_form_is_zero(self) -> bool:
        return self.full_form.is_zero()

    @property
    def bare_ratio_is_zero(self) -> bool:
        return self.bare_ratio.is_zero()

    @property
    def passed(self) -> bool:
        return self.full_form_is_zero and not self.bare_ratio_is_zero

    def to_dict(self) -> dict:
        return {
            "variable": self.variable,
            "full_form": str(self.full_form),
            "full_form_is_zero": self.full_form_is_zero,
            "bare_ratio": str(self.bare_ratio),
            "bare_ratio_is_zero": self.bare_ratio_is_zero,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def verify_dxdx_subtlety(var="x") -> DxdxReport:
    """The derivative of dx/dx is 0; the ratio d^2x/dx^2 on its own is not."""
    v = _sym(var)
    d1, d2 = from_expr(Atom(v.name, 1)), from_expr(Atom(v.name, 2))
    # the full form d^2x/dx^2 - (dx/dx)(d^2x/dx^2), built without cancelling dx/dx first
    written = DiffRational(d2.num, (d1 ** 2).num, reduce=False) - \
        DiffRational(d1.num, d1.num, reduce=False) * DiffRational(d2.num, (d1 ** 2).num, reduce=False)
    full = arbogast_expand(v, v, 2).expansion
    if written != full:
        raise AssertionError("recurrence and written full form disagree")
    return DxdxReport(v.name, full, d2 / d1 ** 2)
