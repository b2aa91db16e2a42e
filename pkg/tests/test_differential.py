import pytest
from hypothesis import given, settings

from diffalg.differential import (
    UndefinedDifferential, differentiate, differentiate_equation, nth_differential,
)
from diffalg.expr import Const, Func, Sym, normalize
from diffalg.parser import parse
from exprgen import exprs, normalizable, polys

x, y = Sym("x"), Sym("y")


@pytest.mark.parametrize("text, expected", [
    ("x^3", "3x^2 dx"),
    ("5", "0"),
    ("x*y", "x dy + y dx"),
    ("1/x", "-dx/x^2"),
    ("dx", "d^2x"),
    ("sin(x)", "dx cos(x)"),
    ("exp(2x)", "2 dx exp(2x)"),
    ("ln(x)", "dx/x"),
    ("x^(1/2)", "dx/(2x^(1/2))"),
    ("2^(1/2) x", "2^(1/2) dx"),
])
def test_first_differentials(text, expected):
    assert differentiate(parse(text)) == parse(expected)


def test_second_differentials():
    assert nth_differential(parse("x^3"), 2) == parse("6x dx^2 + 3x^2 d^2x")
    assert nth_differential(parse("x*y"), 2) == parse("x d^2y + 2 dx dy + y d^2x")
    assert nth_differential(Const(4), 3) == Const(0)
    with pytest.raises(ValueError):
        nth_differential(x, 0)


def test_quotient_needs_no_rule():
    assert differentiate(parse("y/x")) == parse("dy/x - y dx/x^2")


def test_equation():
    lhs, rhs = differentiate_equation(parse("x y"), Const(3))
    assert lhs == parse("x dy + y dx") and rhs == Const(0)


def test_unknown_function():
    with pytest.raises(UndefinedDifferential):
        differentiate(Func("erf", x))


@settings(max_examples=150)
@given(polys(), polys())
def test_leibniz(a, b):
    assert differentiate(a * b) == normalize(a * differentiate(b) + b * differentiate(a))


@settings(max_examples=150)
@given(polys(), polys())
def test_linearity(a, b):
    assert differentiate(a + 3 * b) == normalize(differentiate(a) + 3 * differentiate(b))


@settings(max_examples=100)
@given(exprs(depth=2))
def test_iterate_matches_nth(e):
    if normalizable(e):
        try:
            once = differentiate(differentiate(e))
        except Exception:
            return
        assert once == nth_differential(e, 2)
