import pytest

from smoothpairs.catalog import FAMILIES, BadParameters, build, entry, list_ids, parameters, regression_entries
from smoothpairs.pairs import kummerian_verdict, theta_abelian_certify, torsion_at
from smoothpairs.subgroups import orientation_sweep, smooth_check

N = 3


def outcome(v):
    return "refuted" if v.refuted else "not_refuted"


@pytest.mark.parametrize("e", regression_entries(N), ids=lambda e: f"{e.id}-{e.params}")
def test_regression_metadata(e):
    exp = e.expected
    assert outcome(kummerian_verdict(e.pair, N)) == exp["kummerian"]
    if "smooth" in exp:
        assert outcome(smooth_check(e.pair, 1, min(N, 2))) == exp["smooth"]
    assert theta_abelian_certify(e.pair).certified == exp["theta_abelian"]


def test_sweeps_for_two_generator_entries():
    # three-generator sweeps run in the acceptance suite
    for e in regression_entries(2):
        if e.expected.get("sweep") == "kummerian" and e.pair.d <= 2:
            res = orientation_sweep(e.pair.presentation, 2)
            assert res and all(v.refuted for _, v in res), e.id


def test_examples():
    h = build("heisenberg", 3)
    assert h.d == 2 and len(h.presentation.relators) == 2
    g1 = build("G1", 3, 2, s=1)
    v = kummerian_verdict(g1, 2)
    assert v.refuted and v.level == 2
    assert torsion_at(g1, 2).witness["exponent"] == 1
    f = build("free", 3, 2, d=2, theta={"x": 4, "y": 1})
    assert f.orientation.values == (4, 1)
    assert all(kummerian_verdict(f, n).certified for n in (1, 2))


def test_demushkin_orientation():
    dem = build("demushkin2", 3, 4, s=2)
    assert dem.orientation.values[1] * (1 - 9) % 81 == 1
    assert dem.orientation.values[0] == 1


def test_G1_twisted_orientation():
    g = build("G1", 5, 3, s=1, twisted=1)
    assert g.orientation.values[0] * 6 % 125 == 1


def test_G2rho_uses_nonsquare():
    assert "y2^-6" in build("G2rho", 3, 3).presentation.relator_strings()[1]
    g = build("G2rho", 5, 2, rho=2)
    assert g.presentation.relator_strings()[1].endswith("y2^-10")


@pytest.mark.parametrize(
    "eid,p,kw",
    [
        ("G1", 3, {"s": 0}),
        ("G4", 3, {"s": 0, "r": 0}),
        ("demushkin2", 2, {"s": 1}),
        ("demushkin2", 3, {"s": 0}),
        ("free", 4, {}),
        ("free", 3, {"bogus": 1}),
        ("G0", 3, {"theta": {"x": 4}}),
        ("nope", 3, {}),
        ("free", 3, {"theta": {"w": 4}}),
    ],
)
def test_bad_parameters(eid, p, kw):
    with pytest.raises(BadParameters):
        entry(eid, p, 3, **kw)


def test_listing():
    ids = list_ids()
    assert set(FAMILIES) <= set(ids)
    for i in ids:
        assert isinstance(parameters(i), dict)
        e = entry(i, 3, 2)
        assert set(e.to_json()) >= {"id", "params", "expected", "pair"}
