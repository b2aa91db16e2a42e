"""Numeric ground truth for differential identities.

A quantity along a curve t -> (x(t), y(t), ...) is carried as a ``Jet``: its
truncated Taylor coefficients in t about t0.  Along the curve ``t`` is the
progression, so ``d^k s`` evaluates to ``s^(k)(t0) * dt^k``.  Everything here
is computed from the parametrization alone and never looks at the symbolic
expansions, which is what makes it an oracle for them.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

import numpy as np

from .expr import Add, Atom, Const, Expr, Func, Mul, Pow, Sym, free_atoms, free_symbols, normalize
from .rational import DiffPolynomial, DiffRational
from .univariate import UnivariatePoly

__all__ = [
    "Jet", "Parametrization", "DenominatorVanishes", "UnboundSymbol",
    "StationaryParametrization", "InconclusiveSampling", "IdentityReport",
    "jet_of", "eval_diff_expr", "quotient_derivative_oracle",
    "finite_difference_oracle", "check_identity", "relative_error",
    "random_parametrization",
]

# |denominator| at or below this counts as a pole
POLE_THRESHOLD = 1e-12


class DenominatorVanishes(ZeroDivisionError):
    def __init__(self, t0):
        super().__init__(f"denominator vanishes at t0={t0}")
        self.t0 = t0


class UnboundSymbol(KeyError):
    def __str__(self):
        return f"unbound symbol {self.args[0]!r}"


class StationaryParametrization(ZeroDivisionError):
    pass


class InconclusiveSampling(RuntimeError):
    pass


class Jet:
    """Truncated Taylor coefficients c[0..K]; arithmetic is exact through order K."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)

    @classmethod
    def constant(cls, value: float, K: int) -> "Jet":
        c = np.zeros(K + 1)
        c[0] = value
        return cls(c)

    @property
    def K(self) -> int:
        return len(self.c) - 1

    @property
    def value(self) -> float:
        return float(self.c[0])

    def __repr__(self):
        return f"Jet({self.c.tolist()})"

    def _check(self, other: "Jet") -> "Jet":
        if not isinstance(other, Jet):
            return Jet.constant(float(other), self.K)
        if other.K != self.K:
            raise ValueError(f"jet orders differ: {self.K} vs {other.K}")
        return other

    def __add__(self, other):
        return Jet(self.c + self._check(other).c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, other):
        return Jet(self.c - self._check(other).c)

    def __rsub__(self, other):
        return Jet(self._check(other).c - self.c)

    def __mul__(self, other):
        o = self._check(other)
        return Jet(np.convolve(self.c, o.c)[: self.K + 1])

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a = self.c
        if abs(a[0]) <= POLE_THRESHOLD:
            raise ZeroDivisionError("jet with vanishing constant term")
        b = np.zeros_like(a)
        b[0] = 1.0 / a[0]
        for k in range(1, len(a)):
            b[k] = -np.dot(a[1:k + 1], b[k - 1::-1][:k]) / a[0]
        return Jet(b)

    def __truediv__(self, other):
        return self * self._check(other).reciprocal()

    def __rtruediv__(self, other):
        return self._check(other) * self.reciprocal()

    def __pow__(self, p) -> "Jet":
        p = Fraction(p)
        if p.denominator == 1:
            n = int(p)
            if n < 0:
                return (self ** -n).reciprocal()
            result = Jet.constant(1.0, self.K)
            base = self
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        a = self.c
        if a[0] == 0:
            raise ZeroDivisionError("fractional power of a jet with zero constant term")
        sign = 1.0
        if a[0] < 0:
            if p.denominator % 2 == 0:
                raise ValueError("even root of a negative value")
            sign = -1.0 if p.numerator % 2 else 1.0
            a = -a
        pf = float(p)
        b = np.zeros_like(a)
        b[0] = a[0] ** pf
        for k in range(1, len(a)):
            j = np.arange(1, k + 1)
            b[k] = np.sum((pf * j - (k - j)) * a[1:k + 1] * b[k - 1::-1][:k]) / (k * a[0])
        return Jet(sign * b)

    def exp(self) -> "Jet":
        a = self.c
        b = np.zeros_like(a)
        b[0] = math.exp(a[0])
        for k in range(1, len(a)):
            j = np.arange(1, k + 1)
            b[k] = np.sum(j * a[1:k + 1] * b[k - 1::-1][:k]) / k
        return Jet(b)

    def log(self) -> "Jet":
        a = self.c
        if a[0] <= 0:
            raise ValueError("logarithm of a non-positive value")
        b = np.zeros_like(a)
        b[0] = math.log(a[0])
        for k in range(1, len(a)):
            j = np.arange(1, k)
            b[k] = (a[k] - np.sum(j * b[1:k] * a[k - 1:0:-1]) / k) / a[0]
        return Jet(b)

    def sincos(self) -> tuple["Jet", "Jet"]:
        a = self.c
        s = np.zeros_like(a)
        c = np.zeros_like(a)
        s[0], c[0] = math.sin(a[0]), math.cos(a[0])
        for k in range(1, len(a)):
            j = np.arange(1, k + 1)
            ja = j * a[1:k + 1]
            s[k] = np.sum(ja * c[k - 1::-1][:k]) / k
            c[k] = -np.sum(ja * s[k - 1::-1][:k]) / k
        return Jet(s), Jet(c)

    def derivative(self) -> "Jet":
        """Jet of d/dt, one order shorter."""
        return Jet(self.c[1:] * np.arange(1, len(self.c)))

    def truncate(self, K: int) -> "Jet":
        return Jet(self.c[: K + 1])


JET_FUNCTIONS: dict[str, Callable[[Jet], Jet]] = {
    "sin": lambda j: j.sincos()[0],
    "cos": lambda j: j.sincos()[1],
    "exp": Jet.exp,
    "ln": Jet.log,
}


@dataclass
class Parametrization:
    """A concrete curve: each symbol is a polynomial in t, evaluated at t0."""

    bindings: Mapping[str, UnivariatePoly]
    t0: float = 0.0
    dt_value: float = 1.0
    K: Optional[int] = None

    def __post_init__(self):
        self.bindings = {
            (k.name if isinstance(k, Sym) else k): (v if isinstance(v, UnivariatePoly)
                                                   else UnivariatePoly(v, "t"))
            for k, v in self.bindings.items()
        }
        if self.dt_value <= 0:
            raise ValueError("dt_value must be positive")

    @classmethod
    def parse(cls, text: str, t0: float = 0.0, dt_value: float = 1.0) -> "Parametrization":
        """From text such as ``"x=t^2, y=t^6"``."""
        from .parser import parse

        bindings = {}
        for part in text.split(","):
            if not part.strip():
                continue
            name, sep, rhs = part.partition("=")
            if not sep:
                raise ValueError(f"expected name=polynomial, got {part.strip()!r}")
            bindings[Sym(name.strip()).name] = UnivariatePoly.from_expr(parse(rhs), "t")
        return cls(bindings, t0, dt_value)

    def poly(self, name: str) -> UnivariatePoly:
        try:
            return self.bindings[name]
        except KeyError:
            raise UnboundSymbol(name) from None

    def to_dict(self) -> dict:
        return {
            "bindings": {k: str(v.to_expr()) for k, v in sorted(self.bindings.items())},
            "t0": self.t0,
            "dt_value": self.dt_value,
        }


def _symbol_jet(p: Parametrization, name: str, order: int, K: int) -> Jet:
    poly = p.poly(name).derivative(order)
    return Jet(np.array(poly.taylor(p.t0, K)) * p.dt_value ** order)


def _expr_jet(e: Expr, p: Parametrization, K: int, memo: dict) -> Jet:
    hit = memo.get(e)
    if hit is not None:
        return hit
    if isinstance(e, Const):
        out = Jet.constant(float(e.value), K)
    elif isinstance(e, Sym):
        out = _symbol_jet(p, e.name, 0, K)
    elif isinstance(e, Atom):
        out = _symbol_jet(p, e.base, e.order, K)
    elif isinstance(e, Add):
        out = Jet.constant(0.0, K)
        for t in e.terms:
            out = out + _expr_jet(t, p, K, memo)
    elif isinstance(e, Mul):
        out = Jet.constant(1.0, K)
        for f in e.factors:
            out = out * _expr_jet(f, p, K, memo)
    elif isinstance(e, Pow):
        base = _expr_jet(e.base, p, K, memo)
        if e.exp < 0 and abs(base.value) <= POLE_THRESHOLD:
            raise DenominatorVanishes(p.t0)
        out = base ** e.exp
    elif isinstance(e, Func):
        fn = JET_FUNCTIONS.get(e.name)
        if fn is None:
            raise ValueError(f"no numeric rule for function {e.name!r}")
        out = fn(_expr_jet(e.arg, p, K, memo))
    else:
        raise TypeError(f"cannot evaluate {e!r}")
    memo[e] = out
    return out


def _poly_jet(poly: DiffPolynomial, p: Parametrization, K: int, memo: dict) -> Jet:
    out = Jet.constant(0.0, K)
    for m, c in poly.terms.items():
        t = Jet.constant(float(c), K)
        for g, e in m:
            t = t * (_expr_jet(g, p, K, memo) ** e)
        out = out + t
    return out


def _max_order(obj) -> int:
    gens = obj.generators() if isinstance(obj, DiffRational) else free_atoms(obj)
    orders = [a.order for g in gens for a in ([g] if isinstance(g, Atom) else free_atoms(g))]
    return max(orders, default=0)


def jet_of(obj: Union[Expr, DiffRational], p: Parametrization, K: Optional[int] = None) -> Jet:
    """The jet in t of an expression or rational along the curve ``p``."""
    if K is None:
        K = p.K if p.K is not None else _max_order(obj) + 1
    memo: dict = {}
    if isinstance(obj, DiffRational):
        num = _poly_jet(obj.num, p, K, memo)
        den = _poly_jet(obj.den, p, K, memo)
        if abs(den.value) <= POLE_THRESHOLD:
            raise DenominatorVanishes(p.t0)
        return num / den
    return _expr_jet(normalize(obj), p, K, memo)


def eval_diff_expr(obj: Union[Expr, DiffRational], p: Parametrization) -> float:
    """Value at t0, with ``d^k s`` standing for ``s^(k)(t0) * dt_value**k``."""
    return jet_of(obj, p).value


def quotient_derivative_oracle(y_param: UnivariatePoly, x_param: UnivariatePoly, n: int,
                               t0: float) -> float:
    """n-th derivative of y with respect to x along the curve, by brute force:
    g1 = y'(t)/x'(t), g(k+1) = g(k)'(t)/x'(t)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    Y = Jet(y_param.taylor(t0, n))
    X = Jet(x_param.taylor(t0, n))
    xp = X.derivative()
    if abs(xp.value) <= POLE_THRESHOLD:
        raise StationaryParametrization(f"x'(t0) = 0 at t0={t0}")
    g = Y.derivative() / xp
    for k in range(1, n):
        g = g.derivative() / xp.truncate(n - 1 - k)
    return g.value


def finite_difference_oracle(y_param: UnivariatePoly, x_param: UnivariatePoly, n: int,
                             t0: float, h: float = 1e-3) -> float:
    """Same quantity with nested five-point central differences.

    Good to about 1e-4 relative (absolute below 1) for n <= 3 on well
    conditioned curves; a loose cross-check only.
    """
    yp, xp = y_param.derivative(), x_param.derivative()

    def g(k: int, t: float) -> float:
        if k == 1:
            return yp(t) / xp(t)
        f = lambda s: g(k - 1, s)  # noqa: E731
        deriv = (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h)
        return deriv / xp(t)

    if xp(t0) == 0:
        raise StationaryParametrization(f"x'(t0) = 0 at t0={t0}")
    return g(n, t0)


def relative_error(a: float, b: float) -> float:
    """|a-b| relative to the larger magnitude; absolute below 1e-12."""
    scale = max(abs(a), abs(b))
    diff = abs(a - b)
    return diff / scale if scale >= 1e-12 else diff


def random_parametrization(names, rng: random.Random, t0: Optional[float] = None,
                           max_degree: int = 5) -> Parametrization:
    bindings = {}
    for name in sorted(names):
        degree = rng.randint(1, max_degree)
        bindings[name] = UnivariatePoly(
            [Fraction(rng.randint(-300, 300), 100) for _ in range(degree + 1)], "t")
    if t0 is None:
        t0 = rng.uniform(-2.0, 2.0)
    return Parametrization(bindings, t0)


@dataclass
class IdentityReport:
    identity: str
    trials: int
    max_rel_err: float
    tolerance: float
    counterexample: Optional[dict] = None
    resamples: int = 0

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def to_dict(self) -> dict:
        d = {"identity": self.identity, "trials": self.trials,
             "max_rel_err": self.max_rel_err, "tolerance": self.tolerance,
             "passed": self.passed}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _names(obj) -> set:
    if isinstance(obj, DiffRational):
        out = set()
        for g in obj.generators():
            out |= _names(g)
        return out
    return {s.name for s in free_symbols(obj)} | {a.base for a in free_atoms(obj)}


def check_identity(lhs, rhs, trials: int = 100, seed: int = 0, tolerance: float = 1e-9,
                   identity: Optional[str] = None, max_resamples: int = 50) -> IdentityReport:
    """Compare both sides on seeded random polynomial curves."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    names = _names(lhs) | _names(rhs)
    K = max(_max_order(lhs), _max_order(rhs)) + 1
    rng = random.Random(seed)
    worst, worst_case, resamples = 0.0, None, 0
    for _ in range(trials):
        for _attempt in range(max_resamples):
            p = random_parametrization(names, rng)
            p.K = K
            try:
                a, b = eval_diff_expr(lhs, p), eval_diff_expr(rhs, p)
            except (ZeroDivisionError, ValueError):
                resamples += 1
                continue
            if math.isfinite(a) and math.isfinite(b):
                break
            resamples += 1
        else:
            raise InconclusiveSampling(f"{max_resamples} consecutive samples hit singularities")
        err = relative_error(a, b)
        if err > worst:
            worst = err
            if err > tolerance:
                worst_case = {"parametrization": p.to_dict(), "lhs": a, "rhs": b, "rel_err": err}
    label = identity or f"{lhs} = {rhs}"
    return IdentityReport(label, trials, worst, tolerance, worst_case, resamples)
