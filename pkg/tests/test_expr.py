from fractions import Fraction

import pytest
from hypothesis import given, settings

from diffalg.expr import (
    Add, Atom, Const, DomainError, Func, Mul, Pow, Sym, UnresolvedDifferential,
    PendingDifferential, compare, equals, free_atoms, free_symbols, node_key, normalize,
    substitute,
)
from diffalg.parser import parse
from exprgen import corpus, exprs, normalizable

x, y, t = Sym("x"), Sym("y"), Sym("t")
dx, dy = Atom("x"), Atom("y")


def test_atoms_are_distinct_from_powers():
    assert Atom("x", 2) != dx ** 2
    assert normalize(dx * dx) == Pow(dx, Fraction(2))
    assert Atom("x", 2) != dx


def test_bad_names_and_orders():
    with pytest.raises(ValueError):
        Sym("dx")
    with pytest.raises(ValueError):
        Sym("2a")
    with pytest.raises(ValueError):
        Atom("x", 0)
    assert Sym("d").name == "d"


def test_like_terms_and_coefficients():
    assert normalize(x + x) == Mul((Const(2), x))
    assert normalize(x - x) == Const(0)
    assert normalize(Mul((Const(3), x, Const(Fraction(1, 3))))) == x


def test_sum_powers():
    assert equals((x + y) ** 2, x ** 2 + 2 * x * y + y ** 2)
    assert normalize((x + y) / (x + y)) == Const(1)
    assert normalize((x + y) ** Fraction(1, 2) * (x + y) ** Fraction(1, 2)) == normalize(x + y)


def test_monomial_powers_distribute():
    assert normalize((x ** 3) ** Fraction(-5, 3)) == Pow(x, Fraction(-5))
    assert normalize((2 * x) ** 2) == normalize(4 * x ** 2)


def test_constant_roots():
    assert normalize(Pow(Const(8), Fraction(1, 3))) == Const(2)
    assert normalize(Pow(Const(Fraction(4, 9)), Fraction(-1, 2))) == Const(Fraction(3, 2))
    kept = normalize(Pow(Const(2), Fraction(1, 2)))
    assert kept == Pow(Const(2), Fraction(1, 2))
    assert normalize(kept * kept) == Const(2)
    assert normalize(Pow(Const(-8), Fraction(1, 3))) == Const(-2)


def test_domain_errors():
    with pytest.raises(DomainError):
        normalize(Pow(Const(0), Fraction(-1)))
    with pytest.raises(DomainError):
        normalize(Pow(Const(-4), Fraction(1, 2)))


def test_function_exact_values():
    assert normalize(Func("sin", Const(0))) == Const(0)
    assert normalize(Func("exp", Const(0))) == Const(1)
    assert normalize(Func("ln", Const(1))) == Const(0)
    assert normalize(Func("sin", x)) == Func("sin", x)


def test_pending_differential_rejected():
    with pytest.raises(UnresolvedDifferential):
        normalize(PendingDifferential(x + y))


def test_factor_and_term_order():
    e = normalize(Mul((Func("cos", x), dy, Const(3), x)))
    assert isinstance(e, Mul)
    keys = [node_key(f) for f in e.factors[1:]]
    assert keys == sorted(keys)
    assert compare(Atom("x", 2), Atom("x", 1)) == 1
    assert compare(x, dx) == -1
    assert compare(x, x) == 0


def test_substitute_is_simultaneous_and_atoms_opaque():
    assert equals(substitute(x * y, {"x": y, "y": x}), x * y)
    assert substitute(x * dx, {x: t ** 2}) == normalize(t ** 2 * dx)
    assert substitute(dy / dx, {dx: Const(2)}) == normalize(dy / 2)


def test_free_sets():
    e = parse("x dy + sin(t) d^2x")
    assert free_atoms(e) == {dy, Atom("x", 2)}
    assert free_symbols(e) == {x, t}


def test_idempotence_on_corpus():
    for e in corpus(1000, seed=11):
        n = normalize(e)
        assert normalize(n) == n


@settings(max_examples=200)
@given(exprs())
def test_idempotence_property(e):
    if normalizable(e):
        n = normalize(e)
        assert normalize(n) == n


@settings(max_examples=200)
@given(exprs(depth=2), exprs(depth=2))
def test_ordering_is_total_and_antisymmetric(a, b):
    assert compare(a, b) == -compare(b, a)
    assert (compare(a, b) == 0) == (node_key(a) == node_key(b))


def test_ordering_transitive():
    items = sorted(corpus(200, seed=3, depth=2), key=node_key)
    for a, b in zip(items, items[1:]):
        assert compare(a, b) <= 0


@settings(max_examples=100)
@given(exprs(depth=2), exprs(depth=2))
def test_sum_commutes(a, b):
    if normalizable(a) and normalizable(b):
        assert normalize(Add((a, b))) == normalize(Add((b, a)))
        assert normalize(Mul((a, b))) == normalize(Mul((b, a)))


def test_operator_surface():
    assert str(2 - x) == "-x + 2"
    assert normalize(-(-x)) == x
    assert normalize(1 / x) == Pow(x, Fraction(-1))
    with pytest.raises(TypeError):
        x + 0.5
