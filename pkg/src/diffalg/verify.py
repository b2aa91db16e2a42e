"""Checks that tie the symbolic expansions to the numeric oracle."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Optional

from .expansion import arbogast_expand, derivative_of, invert_second_derivative
from .expr import Expr, Sym, free_symbols
from .jet import (
    POLE_THRESHOLD, IdentityReport, InconclusiveSampling, Parametrization,
    StationaryParametrization, eval_diff_expr, quotient_derivative_oracle,
    random_parametrization, relative_error,
)
from .univariate import NotAPolynomial, UnivariatePoly

__all__ = ["expansion_oracle_check", "InverseReport", "verify_inverse"]


def expansion_oracle_check(n: int, trials: int = 100, seed: int = 0, tolerance: float = 1e-9,
                           max_resamples: int = 50) -> IdentityReport:
    """Jet value of the expanded D_x^n y against the quotient-derivative oracle
    on seeded random polynomial curves."""
    expansion = arbogast_expand("y", "x", n).expansion
    rng = random.Random(seed)
    worst, worst_case, resamples = 0.0, None, 0
    for _ in range(trials):
        for _attempt in range(max_resamples):
            p = random_parametrization({"x", "y"}, rng)
            if abs(p.poly("x").derivative()(p.t0)) <= 1e-6:
                resamples += 1
                continue
            try:
                got = eval_diff_expr(expansion, p)
                want = quotient_derivative_oracle(p.poly("y"), p.poly("x"), n, p.t0)
            except (ZeroDivisionError, StationaryParametrization):
                resamples += 1
                continue
            if math.isfinite(got) and math.isfinite(want):
                break
            resamples += 1
        else:
            raise InconclusiveSampling(f"{max_resamples} consecutive samples hit singularities")
        err = relative_error(got, want)
        if err > worst:
            worst = err
            if err > tolerance:
                worst_case = {"parametrization": p.to_dict(), "lhs": got, "rhs": want,
                              "rel_err": err}
    return IdentityReport(f"D_x^{n} y expansion vs quotient oracle", trials, worst, tolerance,
                          worst_case, resamples)


@dataclass
class InverseReport:
    y_of_x: str
    first: str
    second: str
    inverted: str
    general_identity: bool
    numeric_max_rel_err: Optional[float]
    tolerance: float = 1e-9
    points: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        numeric_ok = self.numeric_max_rel_err is None or self.numeric_max_rel_err <= self.tolerance
        return self.general_identity and numeric_ok

    def to_dict(self) -> dict:
        return {
            "y_of_x": self.y_of_x,
            "first_derivative": self.first,
            "second_derivative": self.second,
            "inverse_second_derivative": self.inverted,
            "general_identity_holds": self.general_identity,
            "numeric_max_rel_err": self.numeric_max_rel_err,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def verify_inverse(y_of_x: Expr, x="x", points=(0.5, 1.0, 1.5, 2.0)) -> InverseReport:
    """D_y^2 x = -D_x^2 y (D_x y)^-3, symbolically in general and for ``y_of_x``.

    When ``y_of_x`` is a polynomial the formula's value is compared with the
    oracle on the curve (x, y) = (t, y(t)) with x and y swapped.
    """
    x = x if isinstance(x, Sym) else Sym(x)
    general = invert_second_derivative(arbogast_expand("y", "x", 2).expansion,
                                       arbogast_expand("y", "x", 1).expansion)
    holds = general == arbogast_expand("x", "y", 2).expansion

    d1 = derivative_of(y_of_x, x, 1)
    d2 = derivative_of(y_of_x, x, 2)
    inv = invert_second_derivative(d2, d1)

    worst = None
    try:
        poly = UnivariatePoly.from_expr(y_of_x, x.name)
    except NotAPolynomial:
        poly = None
    if poly is not None and free_symbols(y_of_x) <= {x}:
        y_t = UnivariatePoly(poly.coeffs, "t")
        x_t = UnivariatePoly([0, 1], "t")
        worst = 0.0
        for t0 in points:
            if abs(y_t.derivative()(t0)) <= POLE_THRESHOLD:
                continue
            want = quotient_derivative_oracle(x_t, y_t, 2, t0)
            got = eval_diff_expr(inv, Parametrization({x.name: x_t}, t0))
            worst = max(worst, relative_error(got, want))
    return InverseReport(str(y_of_x), str(d1), str(d2), str(inv), holds, worst)
