import random

import pytest

from randpairs import seeded_pairs
from smoothpairs.catalog import build
from smoothpairs.cocycles import Orientation, theta_eval
from smoothpairs.padics import PrimeCtx
from smoothpairs.pairs import CyclotomicPair, kummerian_verdict, semidirect_pair, theta_ab_module, theta_abelian_certify
from smoothpairs.presentations import Word
from smoothpairs.subgroups import (
    BadSubgroup,
    IndexPSubgroup,
    SweepTooLarge,
    enumerate_index_p,
    orientation_sweep,
    rewrite,
    smooth_check,
    subgroup_report,
    subgroup_tower,
)

HEIS = (["x", "y"], ["[[x,y],x]", "[[x,y],y]"])


def free(p, d, theta=None, n=3):
    names = ["x", "y", "z"][:d]
    return CyclotomicPair.build(p, names, [], theta or {}, precision=n)


@pytest.mark.parametrize("p,d,count", [(3, 1, 1), (3, 2, 4), (2, 3, 7), (5, 2, 6)])
def test_subgroup_count(p, d, count):
    assert len(enumerate_index_p(free(p, d))) == count == (p**d - 1) // (p - 1)


def test_count_uses_frattini_quotient():
    # <x,y | x y^-3> is cyclic mod 3, so only one index-3 subgroup
    pr = CyclotomicPair.build(3, ["x", "y"], ["x y^-3"], precision=2)
    assert [U.phi for U in enumerate_index_p(pr)] == [(0, 1)]


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_rank_law(p, d):
    pr = free(p, d)
    for U in enumerate_index_p(pr):
        for style in ("positive", "negative"):
            R = rewrite(pr, U.with_transversal(style=style))
            assert R.pair.d == 1 + p * (d - 1)
            assert all(r.is_identity() for r in R.pair.presentation.relators)
            S = R.simplified()
            assert S.d == 1 + p * (d - 1) and not S.presentation.relators


def test_orientation_restriction_is_functorial():
    rng = random.Random(5)
    for pr in seeded_pairs(40, seed=17):
        for U in enumerate_index_p(pr)[:3]:
            R = rewrite(pr, U)
            for j in range(R.pair.d):
                assert R.pair.orientation.values[j] == theta_eval(pr.orientation, R.embed(Word.gen(j)))
            w = Word.from_syllables([(rng.randrange(R.pair.d), rng.choice([-2, -1, 1, 3])) for _ in range(4)]) if R.pair.d else Word()
            assert theta_eval(R.pair.orientation, w) == theta_eval(pr.orientation, R.embed(w))


def test_rewritten_relators_hold_in_parent():
    # each rewritten relator embeds as a product of conjugates of relators, so
    # it maps to zero in the parent's abelianization and is killed by theta
    for pr in seeded_pairs(40, seed=23):
        for U in enumerate_index_p(pr)[:2]:
            R = rewrite(pr, U)
            assert len(R.pair.presentation.relators) == pr.p * len(pr.presentation.relators)
            for r in R.pair.presentation.relators:
                assert theta_eval(pr.orientation, R.embed(r)) == 1


def test_transversal_independence():
    cases = [CyclotomicPair.build(3, *HEIS, precision=3), build("demushkin2", 3, 3, s=1), build("G1", 3, 3, s=1)]
    cases += list(seeded_pairs(30, seed=41))
    for pr in cases:
        n = min(pr.precision, 3)
        for U in enumerate_index_p(pr):
            ts = [i for i, c in enumerate(U.phi) if c % pr.p]
            verdicts = set()
            for t in ts:
                for style in ("positive", "negative"):
                    H = rewrite(pr, U.with_transversal(t, style)).simplified()
                    v = kummerian_verdict(H, n)
                    verdicts.add((v.refuted, v.level if v.refuted else None))
            assert len(verdicts) == 1, (str(pr), U)


def test_rewrite_rejects_bad_phi():
    pr = CyclotomicPair.build(3, ["x", "y"], ["x y^-3"], precision=2)
    with pytest.raises(BadSubgroup):
        rewrite(pr, IndexPSubgroup((1, 0), 0))
    with pytest.raises(BadSubgroup):
        rewrite(pr, IndexPSubgroup((0, 1), 0))


def test_abelian_rewrites_to_abelian():
    pr = CyclotomicPair.build(3, ["x", "y"], ["[x,y]"], precision=3)
    for U in enumerate_index_p(pr):
        H = rewrite(pr, U).simplified()
        assert theta_ab_module(H, 3).profile.torsion == ()
        assert H.d == 2 and theta_abelian_certify(H).certified


def test_heisenberg_subgroup_matches_hand_computation():
    G = CyclotomicPair.build(3, *HEIS, precision=3)
    H = rewrite(G, IndexPSubgroup((1, 0), 0)).simplified()
    ref = CyclotomicPair.build(3, ["t", "y", "z"], ["[t,z]", "[y,z]", "[t,y] z^-3"], precision=3)
    ph, pr = theta_ab_module(H, 3).profile, theta_ab_module(ref, 3).profile
    assert (ph.torsion, ph.cokernel()) == (pr.torsion, pr.cokernel())
    for n in (1, 2, 3):
        a, b = kummerian_verdict(H, n), kummerian_verdict(ref, n)
        assert (a.refuted, a.level) == (b.refuted, b.level)


def test_smooth_check_examples():
    v = smooth_check(CyclotomicPair.build(3, *HEIS, precision=2), 1, 2)
    assert v.refuted and v.witness["kind"] == "subgroup" and v.witness["index"] == 3
    for k in (0, 1, 2):
        w = smooth_check(free(3, 2, {"x": 4}), k, 2)
        assert w.outcome == "undecided" and w.evidence["passes_at"] == [1, 2]
    sd = semidirect_pair(1, free(3, 1, {"x": 4}))
    assert not smooth_check(sd, 1, 3).refuted


def test_smooth_check_monotone():
    for pr in [CyclotomicPair.build(3, *HEIS, precision=2)] + list(seeded_pairs(15, seed=8, max_d=2)):
        n = min(pr.precision, 2)
        if smooth_check(pr, 0, n).refuted:
            assert smooth_check(pr, 1, n).refuted
        if smooth_check(pr, 1, n).refuted:
            assert smooth_check(pr, 2, n).refuted


def test_tower_contains_lower_levels():
    pr = free(2, 2)
    one = subgroup_tower(pr, 1)
    two = subgroup_tower(pr, 2)
    assert [c for c, _ in one] == [c for c, _ in two][: len(one)]
    # distinct subgroups with identical rewritten presentations are merged
    assert 2 <= len(one) <= 4 and all(H.d == 3 for _, H in one[1:])
    assert all(H.d in (3, 5) for _, H in two[1:])


def test_sweep_examples():
    free2 = CyclotomicPair.build(3, ["x", "y"], [], precision=2).presentation
    res = orientation_sweep(free2, 2)
    assert len(res) == 9 and all(v.certified for _, v in res)
    g4 = build("G4", 3, 3, s=1, r=0).presentation
    res = orientation_sweep(g4, 3)
    assert res and all(v.refuted for _, v in res)
    with pytest.raises(SweepTooLarge) as info:
        orientation_sweep(g4, 3, cap=100)
    assert info.value.count == 9**3


def test_heisenberg_u_sweep():
    res = orientation_sweep(build("heisenberg_U", 3, 2).presentation, 2)
    assert len(res) == 27 and all(v.refuted and v.level == 2 for _, v in res)


def test_subgroup_report_shape():
    rep = subgroup_report(CyclotomicPair.build(3, *HEIS, precision=2), 2)
    assert len(rep) == 4
    assert set(rep[0]) == {"phi", "presentation", "verdict"}


def test_theta_abelian_restrictions_pass():
    sd = semidirect_pair(2, free(3, 1, {"x": 4}, n=3))
    for U in enumerate_index_p(sd):
        H = rewrite(sd, U).simplified()
        assert not kummerian_verdict(H, 3).refuted


def test_restricted_orientation_is_valid():
    for pr in seeded_pairs(20, seed=3):
        for U in enumerate_index_p(pr)[:2]:
            H = rewrite(pr, U).pair
            CyclotomicPair(H.presentation, Orientation(H.orientation.values, PrimeCtx(pr.p, pr.precision)))
