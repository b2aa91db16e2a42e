"""Random expression trees for property tests."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from diffalg.expr import Add, Atom, Const, DomainError, Func, Mul, Pow, Sym, normalize

NAMES = ("x", "y", "t", "u")
EXPONENTS = tuple(Fraction(e) for e in ("-2", "-1", "-1/2", "1/3", "1/2", "2", "3"))
CONSTS = tuple(Fraction(c) for c in ("-3", "-1", "1/2", "2", "5/3", "7"))


def random_expr(rng: random.Random, depth: int = 3):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.25:
            return Const(rng.choice(CONSTS))
        if r < 0.6:
            return Sym(rng.choice(NAMES))
        return Atom(rng.choice(NAMES), rng.randint(1, 3))
    kind = rng.random()
    if kind < 0.35:
        return Add(tuple(random_expr(rng, depth - 1) for _ in range(rng.randint(2, 3))))
    if kind < 0.7:
        return Mul(tuple(random_expr(rng, depth - 1) for _ in range(rng.randint(2, 3))))
    if kind < 0.9:
        return Pow(random_expr(rng, depth - 1), rng.choice(EXPONENTS))
    return Func(rng.choice(("sin", "cos", "exp", "ln")), random_expr(rng, depth - 1))


def normalizable(e) -> bool:
    try:
        normalize(e)
    except (DomainError, ZeroDivisionError):
        return False
    return True


def corpus(n: int, seed: int, depth: int = 3) -> list:
    """n normalizable random trees, deterministic in seed."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        e = random_expr(rng, depth)
        if normalizable(e):
            out.append(e)
    return out


@st.composite
def exprs(draw, depth: int = 3):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    e = random_expr(random.Random(seed), depth)
    return e


@st.composite
def polys(draw, names=("x", "y"), max_terms: int = 4):
    """Polynomials in symbols and first/second differentials."""
    gens = [Sym(n) for n in names] + [Atom(n, k) for n in names for k in (1, 2)]
    terms = []
    for _ in range(draw(st.integers(1, max_terms))):
        c = Const(Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 3))))
        fs = [draw(st.sampled_from(gens)) for _ in range(draw(st.integers(0, 3)))]
        terms.append(Mul((c, *fs)))
    return normalize(Add(tuple(terms)))
