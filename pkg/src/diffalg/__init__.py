"""Differentials as algebraic units: d(), Arbogast expansions, and checks."""

from .differential import (
    UndefinedDifferential, differentiate, differentiate_equation, nth_differential,
)
from .expansion import (
    DerivativeForm, PatternNotFound, Progression, arbogast_expand, derivative_of,
    invert_second_derivative, reduce_with_progression, reinflate_second,
    verify_dxdx_subtlety, verify_second_chain_rule,
)
from .expr import (
    Add, Atom, Const, DomainError, Expr, Func, Mul, PendingDifferential, Pow, Sym,
    UnresolvedDifferential, equals, normalize, substitute,
)
from .jet import (
    DenominatorVanishes, InconclusiveSampling, Jet, Parametrization,
    StationaryParametrization, UnboundSymbol, check_identity, eval_diff_expr,
    quotient_derivative_oracle,
)
from .ode import (
    BlowupDetected, ImplicitSolution, UnivariatePoly, ZeroInitialSlope, fit_constants,
    integrate_poly, solve_by_swap, verify_numeric,
)
from .parser import ParseError, SourceSpan, format_expr, parse
from .rational import DiffPolynomial, DiffRational, DivisionByZeroPolynomial

__version__ = "0.1.0"

__all__ = [
    "Add", "Atom", "Const", "DomainError", "Expr", "Func", "Mul", "PendingDifferential",
    "Pow", "Sym", "UnresolvedDifferential", "equals", "normalize", "substitute",
    "ParseError", "SourceSpan", "format_expr", "parse",
    "UndefinedDifferential", "differentiate", "differentiate_equation", "nth_differential",
    "DiffPolynomial", "DiffRational", "DivisionByZeroPolynomial",
    "DerivativeForm", "PatternNotFound", "Progression", "arbogast_expand", "derivative_of",
    "invert_second_derivative", "reduce_with_progression", "reinflate_second",
    "verify_dxdx_subtlety", "verify_second_chain_rule",
    "DenominatorVanishes", "InconclusiveSampling", "Jet", "Parametrization",
    "StationaryParametrization", "UnboundSymbol", "check_identity", "eval_diff_expr",
    "quotient_derivative_oracle",
    "BlowupDetected", "ImplicitSolution", "UnivariatePoly", "ZeroInitialSlope",
    "fit_constants", "integrate_poly", "solve_by_swap", "verify_numeric",
]
