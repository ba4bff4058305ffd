import random

import pytest

from smoothpairs.cocycles import cocycle_spaces
from smoothpairs.oracle import (
    ModelError,
    TinyGroupModel,
    TooLarge,
    brute_cocycles,
    brute_span,
    cyclic,
    elementary_abelian,
    heisenberg_mod_p,
    presentation_cocycles,
    trivial,
)
from smoothpairs.padics import PrimeCtx
from smoothpairs.pairs import CyclotomicPair
from smoothpairs.zpn_linalg import Submodule


def dihedral8():
    def mul(a, b):
        return ((a[0] + (-1) ** a[1] * b[0]) % 4, (a[1] + b[1]) % 2)

    return TinyGroupModel.from_function(2, mul, (0, 0), [(1, 0), (0, 1)])


# (model, presentation, theta on generators, n)
CASES = [
    ("Z/3", lambda: cyclic(3), (3, ["x"], ["x^3"]), (1,), 2),
    ("Z/2", lambda: cyclic(2), (2, ["x"], ["x^2"]), (1,), 2),
    ("Z/9 twisted", lambda: cyclic(3, 2), (3, ["x"], ["x^9"]), (4,), 2),
    ("(Z/3)^2", lambda: elementary_abelian(3, 2), (3, ["x", "y"], ["x^3", "y^3", "[x,y]"]), (1, 1), 2),
    ("(Z/2)^3", lambda: elementary_abelian(2, 3), (2, ["x", "y", "z"], ["x^2", "y^2", "z^2", "[x,y]", "[x,z]", "[y,z]"]), (1, 1, 1), 2),
    (
        "Heis(3)",
        lambda: heisenberg_mod_p(3),
        (3, ["x", "y"], ["x^3", "y^3", "[x,y]^3", "[[x,y],x]", "[[x,y],y]"]),
        (1, 1),
        2,
    ),
    ("D4", dihedral8, (2, ["x", "y"], ["x^4", "y^2", "(x y)^2"]), (1, 1), 2),
    ("trivial", lambda: trivial(3), (3, [], []), (), 2),
]


@pytest.mark.parametrize("name,model,pres,theta,n", CASES, ids=[c[0] for c in CASES])
def test_solver_matches_brute_cocycles(name, model, pres, theta, n):
    p, gens, rels = pres
    pair = CyclotomicPair.build(p, gens, rels, dict(zip(gens, theta)), precision=n)
    for level in range(1, n + 1):
        brute = set(brute_cocycles(model(), theta, level))
        Z1 = cocycle_spaces(pair, level).Z1
        assert set(Z1.elements()) == brute
        assert set(presentation_cocycles(pair, level)) == brute


def test_brute_cocycle_examples():
    assert sorted(brute_cocycles(cyclic(3), (1,), 2)) == [(0,), (3,), (6,)]
    assert brute_cocycles(trivial(3), (), 2) == [()]
    assert len(brute_cocycles(elementary_abelian(3, 2), (1, 1), 1)) == 9


def test_brute_span_examples():
    ctx = PrimeCtx(3, 2)
    assert brute_span([(3, 0)], ctx) == {(0, 0), (3, 0), (6, 0)}
    assert brute_span([], ctx, 2) == {(0, 0)}
    assert len(brute_span([(1, 1)], ctx)) == 9


def test_span_matches_howell_membership():
    rng = random.Random(77)
    for _ in range(120):
        p = rng.choice([2, 3])
        n = rng.randint(1, 3 if p == 2 else 2)
        ctx = PrimeCtx(p, n)
        dim = rng.randint(1, 3)
        rows = [[rng.randrange(p**n) for _ in range(dim)] for _ in range(rng.randint(0, 3))]
        assert set(Submodule.span(rows, ctx, dim).elements()) == brute_span(rows, ctx, dim)


def test_model_validation():
    with pytest.raises(ModelError):
        TinyGroupModel(3, ((0, 1), (1, 0)), (1,))
    with pytest.raises(ModelError):
        # 0 is not an identity
        TinyGroupModel(2, ((1, 0), (0, 1)), (1,))
    with pytest.raises(ModelError):
        cyclic(2, 5)


def test_size_limits():
    with pytest.raises(TooLarge):
        brute_span([(1, 1, 1, 1)], PrimeCtx(5, 3))
    with pytest.raises(TooLarge):
        brute_cocycles(elementary_abelian(3, 4), (1, 1, 1, 1), 3)
