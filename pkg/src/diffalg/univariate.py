"""Dense univariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .expr import Add, Const, Expr, Mul, Pow, Sym, as_fraction, normalize

__all__ = ["UnivariatePoly", "NotAPolynomial"]


class NotAPolynomial(ValueError):
    pass


class UnivariatePoly:
    """sum(coeffs[i] * var**i); trailing zero coefficients are stripped."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Sequence = (), var: str = "y"):
        cs = [as_fraction(c) if not isinstance(c, Fraction) else c for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def from_expr(cls, e: Expr, var: str = "y") -> "UnivariatePoly":
        e = normalize(e)
        coeffs: dict[int, Fraction] = {}
        for term in (e.terms if isinstance(e, Add) else (e,)):
            c, k = _monomial(term, var)
            coeffs[k] = coeffs.get(k, 0) + c
        n = max(coeffs, default=-1) + 1
        return cls([coeffs.get(i, 0) for i in range(n)], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        if not isinstance(other, UnivariatePoly):
            return NotImplemented
        return self.coeffs == other.coeffs and (self.var == other.var or not self.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UnivariatePoly({[str(c) for c in self.coeffs]}, {self.var!r})"

    def __str__(self):
        return str(self.to_expr())

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, Fraction) else float(c))
        return acc

    def __add__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UnivariatePoly([x + y for x, y in zip(a, b)], self.var)

    def __neg__(self):
        return UnivariatePoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UnivariatePoly):
            return UnivariatePoly([c * as_fraction(other) for c in self.coeffs], self.var)
        out = [Fraction(0)] * max(0, len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UnivariatePoly(out, self.var)

    __rmul__ = __mul__

    def derivative(self, k: int = 1) -> "UnivariatePoly":
        cs = list(self.coeffs)
        for _ in range(k):
            cs = [i * c for i, c in enumerate(cs)][1:]
        return UnivariatePoly(cs, self.var)

    def integrate(self) -> "UnivariatePoly":
        """Antiderivative with zero constant term."""
        if not self.coeffs:
            return UnivariatePoly((), self.var)
        return UnivariatePoly([Fraction(0)] + [c / (i + 1) for i, c in enumerate(self.coeffs)], self.var)

    def taylor(self, t0: float, K: int) -> list[float]:
        """Taylor coefficients of self about t0, orders 0..K."""
        cs = [float(c) for c in self.coeffs]
        out = []
        for _ in range(K + 1):
            if not cs:
                out.append(0.0)
                continue
            # synthetic division by (t - t0): remainder is the value
            acc = 0.0
            quot = []
            for c in reversed(cs):
                acc = acc * t0 + c
                quot.append(acc)
            out.append(quot.pop())
            cs = list(reversed(quot))
        return out

    def to_expr(self) -> Expr:
        v = Sym(self.var)
        return normalize(Add(tuple(Mul((Const(c), Pow(v, Fraction(i))))
                                   for i, c in enumerate(self.coeffs) if c)))


def _monomial(term: Expr, var: str) -> tuple[Fraction, int]:
    if isinstance(term, Const):
        return term.value, 0
    factors = term.factors if isinstance(term, Mul) else (term,)
    coef, k = Fraction(1), 0
    for f in factors:
        if isinstance(f, Const):
            coef *= f.value
        elif f == Sym(var):
            k += 1
        elif isinstance(f, Pow) and f.base == Sym(var) and f.exp.denominator == 1 and f.exp > 0:
            k += int(f.exp)
        else:
            raise NotAPolynomial(f"not a polynomial in {var}: contains {f}")
    return coef, k
