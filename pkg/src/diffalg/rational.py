"""Ratios of polynomials whose variables are symbols, differentials and
opaque function applications.

``DiffPolynomial`` stores ``{monomial: coefficient}`` with monomials as
tuples of ``(generator, positive int exponent)`` sorted by generator key.
Terms are ordered lexicographically with the largest generator first; this is
a monomial order, so the leading term of a product is the product of leading
terms and exact division can be decided term by term.

``DiffRational.reduce`` removes the common monomial factor and the rational
content, makes the denominator primitive with a positive leading coefficient,
and then tries exact division of each side by the other.  That is enough for
every ratio built from differentials; equality is nevertheless decided by
cross-multiplication, which is complete.

A fractional power ``g^(p/q)`` enters as the integer power ``p`` of the
generator ``g^(1/q)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

from .expr import Add, Atom, Const, Expr, Func, Mul, Pow, Sym, normalize

__all__ = [
    "DivisionByZeroPolynomial", "DiffPolynomial", "DiffRational",
    "from_expr", "to_expr",
]


class DivisionByZeroPolynomial(ZeroDivisionError):
    pass


def _sorted_mono(ge: Mapping) -> tuple:
    return tuple(sorted(((g, e) for g, e in ge.items() if e), key=lambda item: item[0].key))


def _lex_key(m: tuple) -> tuple:
    return tuple((g.key, e) for g, e in reversed(m))


def _mono_div(a: tuple, b: tuple):
    """a / b as a monomial, or None when b does not divide a."""
    ge = dict(a)
    for g, e in b:
        left = ge.get(g, 0) - e
        if left < 0:
            return None
        ge[g] = left
    return _sorted_mono(ge)


class DiffPolynomial:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping = None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def constant(cls, c) -> "DiffPolynomial":
        return cls({(): Fraction(c)})

    @classmethod
    def generator(cls, g: Expr, exponent: int = 1) -> "DiffPolynomial":
        return cls({((g, exponent),): Fraction(1)})

    # -- structure

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, DiffPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"DiffPolynomial({to_expr(DiffRational(self))})"

    def ordered(self) -> list:
        return sorted(self.terms, key=_lex_key, reverse=True)

    def leading(self) -> tuple:
        return max(self.terms, key=_lex_key)

    def generators(self) -> set:
        return {g for m in self.terms for g, _ in m}

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def content(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        cs = self.terms.values()
        return Fraction(math.gcd(*(c.numerator for c in cs)), math.lcm(*(c.denominator for c in cs)))

    def monomial_gcd(self) -> tuple:
        ms = list(self.terms)
        if not ms:
            return ()
        common = dict(ms[0])
        for m in ms[1:]:
            d = dict(m)
            common = {g: min(e, d[g]) for g, e in common.items() if g in d}
        return _sorted_mono(common)

    # -- arithmetic

    def __add__(self, other: "DiffPolynomial") -> "DiffPolynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return DiffPolynomial(out)

    def __neg__(self):
        return DiffPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, DiffPolynomial):
            return self.scale(Fraction(other))
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                ge = dict(m1)
                for g, e in m2:
                    ge[g] = ge.get(g, 0) + e
                m = _sorted_mono(ge)
                out[m] = out.get(m, 0) + c1 * c2
        return DiffPolynomial(out)

    def scale(self, c: Fraction) -> "DiffPolynomial":
        return DiffPolynomial({m: v * c for m, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = DiffPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divide_monomial(self, m: tuple) -> "DiffPolynomial":
        return DiffPolynomial({_mono_div(k, m): c for k, c in self.terms.items()})

    def exact_div(self, other: "DiffPolynomial"):
        """self / other when the division is exact, else None."""
        if not other:
            raise DivisionByZeroPolynomial("division by the zero polynomial")
        lead = other.leading()
        lc = other.terms[lead]
        rem = DiffPolynomial(self.terms)
        quot: dict = {}
        while rem:
            lt = rem.leading()
            m = _mono_div(lt, lead)
            if m is None:
                return None
            c = rem.terms[lt] / lc
            quot[m] = quot.get(m, 0) + c
            rem = rem - DiffPolynomial({m: c}) * other
        return DiffPolynomial(quot)

    def divmod(self, other: "DiffPolynomial"):
        """Generalized division: self = q*other + r, no term of r divisible
        by the leading monomial of ``other``."""
        lead = other.leading()
        lc = other.terms[lead]
        rem = DiffPolynomial(self.terms)
        quot: dict = {}
        r: dict = {}
        while rem:
            lt = rem.leading()
            m = _mono_div(lt, lead)
            if m is None:
                r[lt] = rem.terms[lt]
                rem = DiffPolynomial({k: v for k, v in rem.terms.items() if k != lt})
                continue
            c = rem.terms[lt] / lc
            quot[m] = quot.get(m, 0) + c
            rem = rem - DiffPolynomial({m: c}) * other
        return DiffPolynomial(quot), DiffPolynomial(r)

    def map_generators(self, fn) -> "DiffPolynomial":
        """Replace every generator g by the polynomial fn(g) (or keep it if fn returns None)."""
        out = DiffPolynomial()
        cache = {}
        for m, c in self.terms.items():
            term = DiffPolynomial.constant(c)
            for g, e in m:
                if g not in cache:
                    cache[g] = fn(g)
                rep = cache[g]
                term = term * (DiffPolynomial.generator(g, e) if rep is None else rep ** e)
            out = out + term
        return out

    def to_expr(self) -> Expr:
        return normalize(Add(tuple(_term_expr(m, c) for m, c in self.terms.items())))


def _term_expr(m: tuple, c: Fraction) -> Expr:
    return Mul((Const(c),) + tuple(Pow(g, Fraction(e)) for g, e in m))


class DiffRational:
    """numerator / denominator, kept reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: DiffPolynomial, den: DiffPolynomial = None, *, reduce: bool = True):
        den = DiffPolynomial.constant(1) if den is None else den
        if not den:
            raise DivisionByZeroPolynomial("zero denominator")
        self.num, self.den = (num, den)
        if reduce:
            self.num, self.den = _reduce(num, den)

    @classmethod
    def constant(cls, c) -> "DiffRational":
        return cls(DiffPolynomial.constant(c))

    @classmethod
    def from_expr(cls, e: Expr) -> "DiffRational":
        return from_expr(e)

    def reduce(self) -> "DiffRational":
        return DiffRational(self.num, self.den)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = DiffRational.constant(other)
        if not isinstance(other, DiffRational):
            return NotImplemented
        if self.num == other.num and self.den == other.den:
            return True
        return not (self.num * other.den - other.num * self.den)

    __hash__ = None

    def __repr__(self):
        return f"DiffRational(({self.num.to_expr()!s}) / ({self.den.to_expr()!s}))"

    def __str__(self):
        return str(to_expr(self))

    @staticmethod
    def _lift(other) -> "DiffRational":
        if isinstance(other, DiffRational):
            return other
        if isinstance(other, (int, Fraction)):
            return DiffRational.constant(other)
        if isinstance(other, Expr):
            return from_expr(other)
        raise TypeError(f"cannot combine DiffRational with {other!r}")

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return DiffRational(self.num + o.num, self.den)
        return DiffRational(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return DiffRational(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return DiffRational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "DiffRational":
        if not self.num:
            raise DivisionByZeroPolynomial("inverse of zero")
        return DiffRational(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if not o.num:
            raise DivisionByZeroPolynomial("division by the zero rational")
        return DiffRational(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("DiffRational powers must be integers")
        if n >= 0:
            return DiffRational(self.num ** n, self.den ** n)
        return self.inverse() ** (-n)

    def generators(self) -> set:
        return self.num.generators() | self.den.generators()

    def atoms(self) -> set:
        return {g for g in self.generators() if isinstance(g, Atom)}

    def map_generators(self, fn) -> "DiffRational":
        """Apply a generator substitution to both sides; ``fn`` returns a
        DiffRational, an Expr, or None to keep the generator."""
        def lift(g):
            r = fn(g)
            return None if r is None else self._lift(r)

        cache = {}

        def poly_image(p: DiffPolynomial) -> DiffRational:
            acc = DiffRational.constant(0)
            for m, c in p.terms.items():
                t = DiffRational.constant(c)
                for g, e in m:
                    if g not in cache:
                        cache[g] = lift(g)
                    rep = cache[g]
                    t = t * (DiffRational(DiffPolynomial.generator(g, e)) if rep is None else rep ** e)
                acc = acc + t
            return acc

        return poly_image(self.num) / poly_image(self.den)

    def to_expr(self) -> Expr:
        return to_expr(self)


def _reduce(num: DiffPolynomial, den: DiffPolynomial):
    if not num:
        return DiffPolynomial(), DiffPolynomial.constant(1)
    common = _mono_gcd(num.monomial_gcd(), den.monomial_gcd())
    if common:
        num, den = num.divide_monomial(common), den.divide_monomial(common)
    if not den.is_constant():
        q = num.exact_div(den)
        if q is not None:
            num, den = q, DiffPolynomial.constant(1)
        elif len(num.terms) > 1:
            q = den.exact_div(num)
            if q is not None:
                num, den = DiffPolynomial.constant(1), q
    c = den.content()
    if den.terms[den.leading()] < 0:
        c = -c
    if c != 1:
        num, den = num.scale(1 / c), den.scale(1 / c)
    return num, den


def _mono_gcd(a: tuple, b: tuple) -> tuple:
    db = dict(b)
    return _sorted_mono({g: min(e, db[g]) for g, e in a if g in db})


# -- conversion to and from expressions --------------------------------------


def _root_generator(base: Expr, q: int) -> Expr:
    return normalize(Pow(base, Fraction(1, q)))


def _convert(e: Expr) -> DiffRational:
    if isinstance(e, Const):
        return DiffRational.constant(e.value)
    if isinstance(e, (Sym, Atom, Func)):
        return DiffRational(DiffPolynomial.generator(e), reduce=False)
    if isinstance(e, Add):
        acc = DiffRational.constant(0)
        for t in e.terms:
            acc = acc + _convert(t)
        return acc
    if isinstance(e, Mul):
        acc = DiffRational.constant(1)
        for f in e.factors:
            acc = acc * _convert(f)
        return acc
    if isinstance(e, Pow):
        p = e.exp
        if p.denominator == 1:
            return _convert(e.base) ** int(p)
        g = _root_generator(e.base, p.denominator)
        return DiffRational(DiffPolynomial.generator(g), reduce=False) ** p.numerator
    raise TypeError(f"cannot convert {e!r} to a rational function")


def from_expr(e: Expr) -> DiffRational:
    """Exact conversion of a normalized expression to reduced num/den form."""
    return _convert(normalize(e))


def to_expr(r: DiffRational) -> Expr:
    """Expression for ``r``: a sum of monomials over a monomial denominator,
    otherwise quotient plus remainder over the denominator."""
    if not r.num:
        return Const(0)
    den = r.den
    if len(den.terms) == 1:
        ((m, c),) = den.terms.items()
        inv = Mul((Const(1 / c),) + tuple(Pow(g, Fraction(-e)) for g, e in m))
        return normalize(Mul((r.num.to_expr(), inv)))
    q, rem = r.num.divmod(den)
    parts = [q.to_expr()]
    if rem:
        parts.append(Mul((rem.to_expr(), Pow(den.to_expr(), Fraction(-1)))))
    return normalize(Add(tuple(parts)))
