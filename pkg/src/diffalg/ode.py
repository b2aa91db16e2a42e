"""y'' = f(y) (y')^3 solved by swapping the roles of x and y.

Inverting the second derivative turns the equation into D_y^2 x = -f(y),
which integrates twice to x = X(y) + c1 y + c2.  ``verify_numeric`` checks
that relation along an RK4 trajectory of the original equation, for both
signs of X.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .expansion import derivative_of, invert_second_derivative
from .expr import Atom, Expr, Sym
from .rational import DiffRational, from_expr
from .univariate import NotAPolynomial, UnivariatePoly

__all__ = [
    "UnivariatePoly", "NotAPolynomial", "ImplicitSolution", "ZeroInitialSlope",
    "BlowupDetected", "integrate_poly", "swap_derivation", "solve_by_swap",
    "fit_constants", "rk4_trajectory", "NumericReport", "verify_numeric", "convergence_ratio",
]

BLOWUP = 1e6


class ZeroInitialSlope(ValueError):
    pass


class BlowupDetected(ArithmeticError):
    def __init__(self, x: float, y: float, yprime: float):
        super().__init__(f"solution left |y|, |y'| <= {BLOWUP:g} near x={x:.6g} "
                         f"(y={y:.6g}, y'={yprime:.6g})")
        self.x, self.y, self.yprime = x, y, yprime


def integrate_poly(p: UnivariatePoly) -> UnivariatePoly:
    return p.integrate()


@dataclass(frozen=True)
class ImplicitSolution:
    """x = X(y) + c1 y + c2."""

    X: UnivariatePoly
    f: UnivariatePoly
    c1: Sym = Sym("c1")
    c2: Sym = Sym("c2")

    def to_expr(self) -> Expr:
        y = Sym(self.X.var)
        return self.X.to_expr() + self.c1 * y + self.c2

    def __str__(self):
        return f"x = {self.to_expr()}"

    def flipped(self) -> "ImplicitSolution":
        """The same family with X negated."""
        return ImplicitSolution(-self.X, self.f, self.c1, self.c2)


def swap_derivation(f: UnivariatePoly) -> DiffRational:
    """D_y^2 x obtained by inverting D_x^2 y = f(y) (dy/dx)^3; the cube cancels."""
    y = f.var
    d1 = from_expr(Atom(y, 1)) / from_expr(Atom("x", 1)) if y != "x" else None
    if d1 is None:
        raise ValueError("the dependent variable must not be named x")
    d2 = from_expr(f.to_expr()) * d1 ** 3
    return invert_second_derivative(d2, d1)


def solve_by_swap(f: UnivariatePoly) -> ImplicitSolution:
    rhs = swap_derivation(f)
    minus_f = from_expr((-f).to_expr())
    if rhs != minus_f:
        raise AssertionError(f"inversion gave {rhs}, expected {-f}")
    X = -integrate_poly(integrate_poly(f))
    if X.derivative(2) != -f:
        raise AssertionError("X'' != -f")
    if X.coeffs and derivative_of(X.to_expr(), f.var, 2) != minus_f:
        raise AssertionError("symbolic D_y^2 X != -f")
    return ImplicitSolution(X, f)


def fit_constants(sol: ImplicitSolution, y0: float, yprime0: float, x0: float) -> tuple[float, float]:
    """From dx/dy = X'(y) + c1 = 1/y' and x0 = X(y0) + c1 y0 + c2."""
    if yprime0 == 0:
        raise ZeroInitialSlope("y'(x0) = 0: x is not a function of y there")
    c1 = 1.0 / yprime0 - sol.X.derivative()(float(y0))
    c2 = x0 - sol.X(float(y0)) - c1 * y0
    return c1, c2


def rk4_trajectory(f: UnivariatePoly, y0: float, yprime0: float, x0: float, span: float,
                   step: float):
    """Points (x, y, y') of y'' = f(y) y'^3 by classical RK4.

    The number of steps is round(span / step), so the step actually used is
    span / n.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if not math.isfinite(span):
        raise ValueError("span must be finite")
    n = max(1, round(abs(span) / step))
    h = span / n

    def rhs(y, v):
        return v, f(y) * v ** 3

    x, y, v = float(x0), float(y0), float(yprime0)
    points = [(x, y, v)]
    for i in range(1, n + 1):
        x = x0 + i * h
        try:
            k1y, k1v = rhs(y, v)
            k2y, k2v = rhs(y + h / 2 * k1y, v + h / 2 * k1v)
            k3y, k3v = rhs(y + h / 2 * k2y, v + h / 2 * k2v)
            k4y, k4v = rhs(y + h * k3y, v + h * k3v)
        except OverflowError:
            raise BlowupDetected(x, math.inf, math.inf) from None
        y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        if not (abs(y) <= BLOWUP and abs(v) <= BLOWUP):
            raise BlowupDetected(x, y, v)
        points.append((x, y, v))
    return points


@dataclass
class NumericReport:
    f: str
    solution: str
    constants: dict
    max_residual_minus_branch: float
    max_residual_plus_branch: float
    step: float
    span: float
    tolerance: float = 1e-6

    @property
    def passed(self) -> bool:
        return self.max_residual_minus_branch <= self.tolerance

    @property
    def separation(self) -> float:
        """How many times worse the opposite branch fits."""
        if self.max_residual_minus_branch == 0:
            return math.inf
        return self.max_residual_plus_branch / self.max_residual_minus_branch

    def to_dict(self) -> dict:
        return {
            "f": self.f,
            "solution": self.solution,
            "constants": self.constants,
            "max_residual_minus_branch": self.max_residual_minus_branch,
            "max_residual_plus_branch": self.max_residual_plus_branch,
            "step": self.step,
            "span": self.span,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _max_residual(sol: ImplicitSolution, c1: float, c2: float, points) -> float:
    return max(abs(x - (sol.X(y) + c1 * y + c2)) for x, y, _ in points)


def verify_numeric(f: UnivariatePoly, y0: float, yprime0: float, x0: float, span: float,
                   step: float, tolerance: float = 1e-6) -> NumericReport:
    """Residual of x = X(y) + c1 y + c2 along the RK4 trajectory.

    The minus branch is X = -int int f as derived; the plus branch uses -X with
    its own fitted constants.
    """
    sol = solve_by_swap(f)
    other = sol.flipped()
    c1, c2 = fit_constants(sol, y0, yprime0, x0)
    p1, p2 = fit_constants(other, y0, yprime0, x0)
    points = rk4_trajectory(f, y0, yprime0, x0, span, step)
    return NumericReport(
        f=str(f),
        solution=str(sol),
        constants={"minus_branch": {"c1": c1, "c2": c2}, "plus_branch": {"c1": p1, "c2": p2}},
        max_residual_minus_branch=_max_residual(sol, c1, c2, points),
        max_residual_plus_branch=_max_residual(other, p1, p2, points),
        step=step,
        span=span,
        tolerance=tolerance,
    )


def convergence_ratio(f: UnivariatePoly, y0: float, yprime0: float, x0: float, span: float,
                      step: float) -> float:
    """residual(step) / residual(step/2); about 16 for a fourth-order method."""
    a = verify_numeric(f, y0, yprime0, x0, span, step).max_residual_minus_branch
    b = verify_numeric(f, y0, yprime0, x0, span, step / 2).max_residual_minus_branch
    return a / b if b else math.inf
