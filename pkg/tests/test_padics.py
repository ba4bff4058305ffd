import random

import hypothesis.strategies as st
import pytest
from hypothesis import given

from smoothpairs.padics import (
    ContextMismatch,
    NotAUnit,
    PrimeCtx,
    TruncatedInt,
    TruncatedUnit,
    one_units,
    reduce,
    unit_inverse,
    valuation,
)


def egcd_inverse(a, m):
    # textbook extended Euclid, independent of pow(a, -1, m)
    r0, r1, s0, s1 = m, a % m, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    assert r0 == 1
    return s0 % m


def test_reduce_examples():
    assert reduce(17, PrimeCtx(3, 2)).value == 8
    assert reduce(0, PrimeCtx(5, 3)).value == 0
    assert reduce(-1, PrimeCtx(3, 2)).value == 8


def test_prime_ctx_validation():
    with pytest.raises(ValueError):
        PrimeCtx(4, 2)
    with pytest.raises(ValueError):
        PrimeCtx(3, 0)


def test_unit_inverse_examples():
    ctx = PrimeCtx(3, 2)
    assert unit_inverse(TruncatedUnit(4, ctx)).value == 7
    assert unit_inverse(TruncatedUnit(1, PrimeCtx(7, 4))).value == 1
    c5 = PrimeCtx(5, 3)
    inv = unit_inverse(TruncatedUnit(6, c5))
    assert inv.value == egcd_inverse(6, 125) == 21
    assert 6 * 104 % 125 != 1


def test_valuation_examples():
    assert valuation(TruncatedInt(18, PrimeCtx(3, 3))) == 2
    assert valuation(TruncatedInt(0, PrimeCtx(3, 3))) == 3
    assert valuation(TruncatedInt(8, PrimeCtx(7, 2))) == 0


def test_units_enforce_congruence():
    with pytest.raises(NotAUnit):
        TruncatedUnit(2, PrimeCtx(3, 2))
    with pytest.raises(NotAUnit):
        TruncatedUnit(3, PrimeCtx(2, 3))
    TruncatedUnit(5, PrimeCtx(2, 3))
    assert one_units(2, 3) == [1, 5]
    assert one_units(3, 2) == [1, 4, 7]


def test_context_mixing_is_an_error():
    a = TruncatedInt(1, PrimeCtx(3, 2))
    b = TruncatedInt(1, PrimeCtx(3, 3))
    with pytest.raises(ContextMismatch):
        a + b
    with pytest.raises(ContextMismatch):
        a * b


def test_ring_axioms_random_triples():
    rng = random.Random(2024)
    for _ in range(10_000):
        p = rng.choice([2, 3, 5, 7])
        ctx = PrimeCtx(p, rng.randint(1, 5))
        a, b, c = (TruncatedInt(rng.randrange(ctx.modulus), ctx) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert a + 0 == a and a * 1 == a
        assert a + (-a) == 0


@given(st.sampled_from([2, 3, 5]), st.integers(1, 6), st.integers(), st.integers())
def test_valuation_of_product(p, n, x, y):
    ctx = PrimeCtx(p, n)
    a, b = reduce(x, ctx), reduce(y, ctx)
    assert valuation(a * b) == min(valuation(a) + valuation(b), n)


@given(st.sampled_from([2, 3, 5]), st.integers(2, 6), st.integers(), st.integers())
def test_truncation_commutes_with_ring_ops(p, n, x, y):
    ctx = PrimeCtx(p, n)
    a, b = reduce(x, ctx), reduce(y, ctx)
    for m in range(1, n + 1):
        assert (a + b).truncate(m) == a.truncate(m) + b.truncate(m)
        assert (a * b).truncate(m) == a.truncate(m) * b.truncate(m)


@given(st.sampled_from([2, 3, 5]), st.integers(1, 6), st.data())
def test_inverse_is_involution(p, n, data):
    units = one_units(p, n)
    u = TruncatedUnit(data.draw(st.sampled_from(units)), PrimeCtx(p, n))
    inv = unit_inverse(u)
    assert (u * inv).value == 1
    assert unit_inverse(inv) == u
