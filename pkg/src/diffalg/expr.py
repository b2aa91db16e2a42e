"""Expression trees in which differentials are ordinary algebraic atoms.

Nodes are immutable dataclasses. ``normalize`` maps any tree to its
canonical form:

* sums are flat, like terms are merged and zero terms dropped;
* products are flat and carry at most one leading rational coefficient;
* positive integer powers of sums are expanded, every other power of a sum
  is kept as a generator ``Pow(Add, p)`` whose base is primitive (rational
  content pulled out);
* powers of monomials are distributed formally, ``(x^3)^(-5/3) = x^-5``;
* rational constants raised to rational powers are evaluated exactly when
  the root is rational and otherwise kept as ``Pow(Const(c), frac)``.

Ordering.  Every node has a ``node_key``; keys compare by node shape first
(constants < symbols < atoms < functions < powers < products < sums < pending
differentials) and then recursively, so atoms sort by ``(base, order)``.
Factors of a product are ascending in this order.  Terms of a sum are
descending in the lexicographic order induced on monomials, i.e. the term
holding the largest generator (at the highest power) comes first.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Optional, Union

__all__ = [
    "Expr", "Const", "Sym", "Atom", "Add", "Mul", "Pow", "Func",
    "PendingDifferential", "DomainError", "UnresolvedDifferential",
    "FunctionRule", "FUNCTIONS", "register_function",
    "normalize", "equals", "substitute", "free_atoms", "free_symbols",
    "node_key", "compare", "const", "as_fraction",
]

Number = Union[int, Fraction]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
# names the parser reads as differentials
_RESERVED = re.compile(r"d\d*[A-Za-z]\Z")


class DomainError(ArithmeticError):
    """Raised for 0 to a negative power and for even roots of negatives."""


class UnresolvedDifferential(ValueError):
    """A ``PendingDifferential`` reached normalization."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise TypeError(f"expected an exact rational, got {value!r}")
    return Fraction(value)


class Expr:
    """Common operator surface; every operator returns a normalized tree."""

    __slots__ = ()

    def __add__(self, other):
        return normalize(Add((self, _coerce(other))))

    def __radd__(self, other):
        return normalize(Add((_coerce(other), self)))

    def __sub__(self, other):
        return normalize(Add((self, Mul((Const(-1), _coerce(other))))))

    def __rsub__(self, other):
        return normalize(Add((_coerce(other), Mul((Const(-1), self)))))

    def __mul__(self, other):
        return normalize(Mul((self, _coerce(other))))

    def __rmul__(self, other):
        return normalize(Mul((_coerce(other), self)))

    def __truediv__(self, other):
        return normalize(Mul((self, Pow(_coerce(other), Fraction(-1)))))

    def __rtruediv__(self, other):
        return normalize(Mul((_coerce(other), Pow(self, Fraction(-1)))))

    def __neg__(self):
        return normalize(Mul((Const(-1), self)))

    def __pow__(self, exponent):
        return normalize(Pow(self, as_fraction(exponent)))

    def __str__(self) -> str:
        from .parser import format_expr

        return format_expr(self)

    @cached_property
    def key(self) -> tuple:
        return node_key(self)


def _coerce(value) -> Expr:
    if isinstance(value, Expr):
        return value
    return Const(as_fraction(value))


def const(value) -> "Const":
    return Const(as_fraction(value))


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_fraction(self.value))

    def __repr__(self):
        return f"Const({self.value})"


@dataclass(frozen=True, repr=False)
class Sym(Expr):
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not _IDENT.match(self.name):
            raise ValueError(f"invalid symbol name {self.name!r}")
        if _RESERVED.match(self.name):
            raise ValueError(f"symbol name {self.name!r} is reserved for differentials")

    def __repr__(self):
        return f"Sym({self.name!r})"


@dataclass(frozen=True, repr=False)
class Atom(Expr):
    """The ``order``-th differential of the symbol named ``base``."""

    base: str
    order: int = 1

    def __post_init__(self):
        if isinstance(self.base, Sym):
            object.__setattr__(self, "base", self.base.name)
        Sym(self.base)  # validates the name
        if isinstance(self.order, bool) or not isinstance(self.order, int) or self.order < 1:
            raise ValueError(f"differential order must be an integer >= 1, got {self.order!r}")

    @property
    def symbol(self) -> Sym:
        return Sym(self.base)

    def __repr__(self):
        return f"Atom({self.base!r}, {self.order})"


@dataclass(frozen=True, repr=False)
class Add(Expr):
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def __repr__(self):
        return f"Add({', '.join(map(repr, self.terms))})"


@dataclass(frozen=True, repr=False)
class Mul(Expr):
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def __repr__(self):
        return f"Mul({', '.join(map(repr, self.factors))})"


@dataclass(frozen=True, repr=False)
class Pow(Expr):
    base: Expr
    exp: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exp", as_fraction(self.exp))

    def __repr__(self):
        return f"Pow({self.base!r}, {self.exp})"


@dataclass(frozen=True, repr=False)
class Func(Expr):
    name: str
    arg: Expr

    def __repr__(self):
        return f"Func({self.name!r}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class PendingDifferential(Expr):
    """``d^order(arg)`` written by the user but not yet carried out."""

    arg: Expr
    order: int = 1

    def __repr__(self):
        return f"PendingDifferential({self.arg!r}, {self.order})"


# -- function registry -------------------------------------------------------


@dataclass(frozen=True)
class FunctionRule:
    name: str
    derivative: Callable[[Expr], Expr]
    exact: Callable[[Fraction], Optional[Fraction]] = lambda value: None


FUNCTIONS: dict[str, FunctionRule] = {}


def register_function(rule: FunctionRule) -> None:
    FUNCTIONS[rule.name] = rule


register_function(FunctionRule(
    "sin", lambda u: Func("cos", u), lambda v: Fraction(0) if v == 0 else None))
register_function(FunctionRule(
    "cos", lambda u: Mul((Const(-1), Func("sin", u))), lambda v: Fraction(1) if v == 0 else None))
register_function(FunctionRule(
    "exp", lambda u: Func("exp", u), lambda v: Fraction(1) if v == 0 else None))
register_function(FunctionRule(
    "ln", lambda u: Pow(u, Fraction(-1)), lambda v: Fraction(0) if v == 1 else None))


# -- ordering ----------------------------------------------------------------


def node_key(e: Expr) -> tuple:
    if isinstance(e, Const):
        return (0, e.value)
    if isinstance(e, Sym):
        return (1, e.name)
    if isinstance(e, Atom):
        return (2, e.base, e.order)
    if isinstance(e, Func):
        return (3, e.name, e.arg.key)
    if isinstance(e, Pow):
        return (4, e.base.key, e.exp)
    if isinstance(e, Mul):
        return (5, tuple(f.key for f in e.factors))
    if isinstance(e, Add):
        return (6, tuple(t.key for t in e.terms))
    if isinstance(e, PendingDifferential):
        return (7, e.arg.key, e.order)
    raise TypeError(f"not an expression: {e!r}")


def compare(a: Expr, b: Expr) -> int:
    ka, kb = a.key, b.key
    return (ka > kb) - (ka < kb)


# -- canonical form ----------------------------------------------------------
#
# Internally a normalized expression is a dict {monomial: coefficient} where a
# monomial is a tuple of (generator, nonzero rational exponent) pairs sorted
# ascending by generator key.

Monomial = tuple
Terms = dict


def _iroot(n: int, q: int) -> Optional[int]:
    """Exact integer q-th root of n >= 0, or None."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + q - 1) // q)
    while True:
        y = ((q - 1) * x + n // x ** (q - 1)) // q
        if y >= x:
            break
        x = y
    return x if x ** q == n else None


def _const_pow(c: Fraction, p: Fraction) -> tuple[Fraction, Optional[tuple]]:
    """c**p as (rational factor, optional leftover (Const, exponent) generator)."""
    if p == 0:
        return Fraction(1), None
    if c == 0:
        if p < 0:
            raise DomainError("zero raised to a negative power")
        return Fraction(0), None
    if p.denominator == 1:
        return c ** int(p), None
    a, q = p.numerator, p.denominator
    sign = 1
    if c < 0:
        if q % 2 == 0:
            raise DomainError(f"even root of negative constant {c}")
        sign = -1 if a % 2 else 1
        c = -c
    rn, rd = _iroot(c.numerator, q), _iroot(c.denominator, q)
    if rn is not None and rd is not None:
        return sign * Fraction(rn, rd) ** a, None
    whole = math.floor(p)
    frac = p - whole
    return sign * c ** whole, (Const(c), frac)


def _build(coef: Fraction, genexps: Mapping) -> Terms:
    """Terms for coef * prod(g**e), folding constants and expanding sums."""
    if coef == 0:
        return {}
    plain = []
    expansions = []
    for g, e in genexps.items():
        if e == 0:
            continue
        if isinstance(g, Const):
            k, rest = _const_pow(g.value, e)
            coef *= k
            if rest is not None:
                plain.append(rest)
        elif isinstance(g, Add) and e > 0 and e.denominator == 1:
            expansions.append(_pow_int(_terms(g), int(e)))
        else:
            plain.append((g, e))
    if coef == 0:
        return {}
    merged: dict = {}
    for g, e in plain:
        merged[g] = merged.get(g, 0) + e
    if len(merged) != len(plain):
        # a leftover constant root collided with an existing one
        return _mul(_build(coef, merged), _product(expansions))
    plain.sort(key=lambda ge: ge[0].key)
    result = {tuple(plain): coef}
    for t in expansions:
        result = _mul(result, t)
    return result


def _add_into(out: Terms, terms: Terms, scale: Fraction = Fraction(1)) -> None:
    for m, c in terms.items():
        v = out.get(m, 0) + c * scale
        if v:
            out[m] = v
        else:
            out.pop(m, None)


def _mul(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            ge = dict(m1)
            special = False
            for g, e in m2:
                if g in ge:
                    ge[g] += e
                    special = True
                else:
                    ge[g] = e
            if not special and not any(isinstance(g, (Const, Add)) for g in ge):
                m = tuple(sorted(ge.items(), key=lambda item: item[0].key))
                _add_into(out, {m: c1 * c2})
            else:
                _add_into(out, _build(c1 * c2, ge))
    return out


def _product(parts) -> Terms:
    out: Terms = {(): Fraction(1)}
    for t in parts:
        out = _mul(out, t)
    return out


def _pow_int(t: Terms, n: int) -> Terms:
    result: Terms = {(): Fraction(1)}
    base = t
    while n:
        if n & 1:
            result = _mul(result, base)
        n >>= 1
        if n:
            base = _mul(base, base)
    return result


def _lead(t: Terms) -> Monomial:
    return max(t, key=_mono_key)


def _pow(t: Terms, p: Fraction) -> Terms:
    if p == 0:
        return {(): Fraction(1)}
    if not t:
        if p < 0:
            raise DomainError("zero raised to a negative power")
        return {}
    if len(t) == 1:
        ((m, c),) = t.items()
        ge = {g: e * p for g, e in m}
        if c != 1:
            cg = Const(c)
            ge[cg] = ge.get(cg, 0) + p
        return _build(Fraction(1), ge)
    if p > 0 and p.denominator == 1:
        return _pow_int(t, int(p))
    nums = math.gcd(*(c.numerator for c in t.values()))
    dens = math.lcm(*(c.denominator for c in t.values()))
    content = Fraction(nums, dens)
    if p.denominator == 1 and t[_lead(t)] < 0:
        content = -content
    primitive = {m: c / content for m, c in t.items()}
    ge = {_to_expr(primitive): p}
    if content != 1:
        ge[Const(content)] = p
    return _build(Fraction(1), ge)


def _terms(e: Expr) -> Terms:
    if isinstance(e, Const):
        return {(): e.value} if e.value else {}
    if isinstance(e, (Sym, Atom)):
        return {((e, Fraction(1)),): Fraction(1)}
    if isinstance(e, Func):
        arg = normalize(e.arg)
        rule = FUNCTIONS.get(e.name)
        if rule is not None and isinstance(arg, Const):
            value = rule.exact(arg.value)
            if value is not None:
                return {(): value} if value else {}
        return {((Func(e.name, arg), Fraction(1)),): Fraction(1)}
    if isinstance(e, Add):
        out: Terms = {}
        for term in e.terms:
            _add_into(out, _terms(term))
        return out
    if isinstance(e, Mul) or (isinstance(e, Pow) and e.exp.denominator == 1):
        return _build(*_factored(e))
    if isinstance(e, Pow):
        return _pow(_terms(e.base), e.exp)
    if isinstance(e, PendingDifferential):
        raise UnresolvedDifferential("d(...) must be carried out before normalization")
    raise TypeError(f"not an expression: {e!r}")


def _factored(e: Expr) -> tuple[Fraction, dict]:
    """``e`` as coef * prod(g**k) with sums kept whole, so that powers of the
    same sum inside one product meet before anything is expanded."""
    if isinstance(e, Mul):
        coef, ge = Fraction(1), {}
        for f in e.factors:
            c, g = _factored(f)
            coef *= c
            for k, v in g.items():
                ge[k] = ge.get(k, 0) + v
        return coef, ge
    if isinstance(e, Pow) and e.exp.denominator == 1:
        c, g = _factored(e.base)
        ge = {k: v * e.exp for k, v in g.items()}
        if c != 1:
            ge[Const(c)] = ge.get(Const(c), 0) + e.exp
        return Fraction(1), ge
    t = _terms(e)
    if not t:
        return Fraction(0), {}
    if len(t) == 1:
        ((m, c),) = t.items()
        return c, dict(m)
    content = Fraction(math.gcd(*(c.numerator for c in t.values())),
                       math.lcm(*(c.denominator for c in t.values())))
    if t[_lead(t)] < 0:
        content = -content
    return content, {_to_expr({m: c / content for m, c in t.items()}): Fraction(1)}


def _mono_key(m: Monomial) -> tuple:
    return tuple((g.key, e) for g, e in reversed(m))


def _term_expr(m: Monomial, c: Fraction) -> Expr:
    factors = [g if e == 1 else Pow(g, e) for g, e in m]
    if not factors:
        return Const(c)
    if c == 1 and len(factors) == 1:
        return factors[0]
    if c != 1:
        factors.insert(0, Const(c))
    return Mul(tuple(factors))


def _to_expr(t: Terms) -> Expr:
    if not t:
        return Const(0)
    ordered = sorted(t, key=_mono_key, reverse=True)
    if len(ordered) == 1:
        return _term_expr(ordered[0], t[ordered[0]])
    return Add(tuple(_term_expr(m, t[m]) for m in ordered))


def normalize(e: Expr) -> Expr:
    """Canonical form of ``e``; see the module docstring for the rules."""
    return _to_expr(_terms(e))


def equals(a: Expr, b: Expr) -> bool:
    return normalize(a) == normalize(b)


# -- traversal ---------------------------------------------------------------


def _children(e: Expr) -> Iterable[Expr]:
    if isinstance(e, Add):
        return e.terms
    if isinstance(e, Mul):
        return e.factors
    if isinstance(e, (Pow,)):
        return (e.base,)
    if isinstance(e, (Func, PendingDifferential)):
        return (e.arg,)
    return ()


def _walk(e: Expr):
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(_children(node))


def free_atoms(e: Expr) -> set:
    return {n for n in _walk(e) if isinstance(n, Atom)}


def free_symbols(e: Expr) -> set:
    return {n for n in _walk(e) if isinstance(n, Sym)}


def _replace(e: Expr, table: Mapping) -> Expr:
    hit = table.get(e)
    if hit is not None:
        return hit
    if isinstance(e, Add):
        return Add(tuple(_replace(t, table) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(tuple(_replace(f, table) for f in e.factors))
    if isinstance(e, Pow):
        return Pow(_replace(e.base, table), e.exp)
    if isinstance(e, Func):
        return Func(e.name, _replace(e.arg, table))
    if isinstance(e, PendingDifferential):
        return PendingDifferential(_replace(e.arg, table), e.order)
    return e


def substitute(e: Expr, bindings: Mapping) -> Expr:
    """Simultaneously replace symbols/atoms by expressions, then normalize.

    Keys may be ``Sym``, ``Atom`` or a bare symbol name.  Atoms are opaque:
    binding ``x`` leaves ``dx`` untouched.
    """
    table = {}
    for key, value in bindings.items():
        if isinstance(key, str):
            key = Sym(key)
        if not isinstance(key, (Sym, Atom)):
            raise TypeError(f"substitution keys must be symbols or atoms, got {key!r}")
        table[key] = _coerce(value)
    return normalize(_replace(e, table))
