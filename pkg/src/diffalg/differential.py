"""The differential operator d(.), applied without choosing an independent variable.

Every symbol is treated alike: ``d(x) = dx`` and ``d(d^k x) = d^(k+1) x``.
Quotients need no rule of their own since they are negative powers.
"""

from __future__ import annotations


from .expr import (
    FUNCTIONS, Add, Atom, Const, Expr, Func, Mul, PendingDifferential, Pow, Sym,
    normalize,
)

__all__ = [
    "UndefinedDifferential", "differentiate", "nth_differential",
    "differentiate_equation", "resolve_pending",
]


class UndefinedDifferential(ValueError):
    """d() of a function with no registered derivative rule."""


def _d(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(0)
    if isinstance(e, Sym):
        return Atom(e.name, 1)
    if isinstance(e, Atom):
        return Atom(e.base, e.order + 1)
    if isinstance(e, Add):
        return Add(tuple(_d(t) for t in e.terms))
    if isinstance(e, Mul):
        fs = e.factors
        return Add(tuple(Mul(fs[:i] + (_d(f),) + fs[i + 1:]) for i, f in enumerate(fs)))
    if isinstance(e, Pow):
        if isinstance(e.base, Const):
            return Const(0)
        return Mul((Const(e.exp), Pow(e.base, e.exp - 1), _d(e.base)))
    if isinstance(e, Func):
        rule = FUNCTIONS.get(e.name)
        if rule is None:
            raise UndefinedDifferential(f"no differential rule for function {e.name!r}")
        return Mul((rule.derivative(e.arg), _d(e.arg)))
    if isinstance(e, PendingDifferential):
        return _d(nth_differential(e.arg, e.order))
    raise TypeError(f"not an expression: {e!r}")


def resolve_pending(e: Expr) -> Expr:
    """Carry out every ``PendingDifferential`` inside ``e`` and normalize."""
    if isinstance(e, PendingDifferential):
        return nth_differential(resolve_pending(e.arg), e.order)
    if isinstance(e, Add):
        return normalize(Add(tuple(resolve_pending(t) for t in e.terms)))
    if isinstance(e, Mul):
        return normalize(Mul(tuple(resolve_pending(f) for f in e.factors)))
    if isinstance(e, Pow):
        return normalize(Pow(resolve_pending(e.base), e.exp))
    if isinstance(e, Func):
        return normalize(Func(e.name, resolve_pending(e.arg)))
    return normalize(e)


def differentiate(e: Expr) -> Expr:
    """d(e) in canonical form, e.g. ``x^3 -> 3x^2 dx``."""
    return normalize(_d(normalize(e)))


def nth_differential(e: Expr, n: int) -> Expr:
    if n < 1:
        raise ValueError("n must be >= 1")
    e = normalize(e)
    for _ in range(n):
        e = normalize(_d(e))
    return e


def differentiate_equation(lhs: Expr, rhs: Expr) -> tuple[Expr, Expr]:
    """Apply d to both sides of ``lhs = rhs``."""
    return differentiate(lhs), differentiate(rhs)
