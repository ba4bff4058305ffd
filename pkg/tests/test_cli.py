import json

import pytest

from smoothpairs.cli import main
from smoothpairs.pairs import read_pair


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def verdict_line(text):
    line = [ln for ln in text.splitlines() if ln.startswith("verdict: ")][-1]
    return json.loads(line[len("verdict: "):])


@pytest.fixture
def free2(tmp_path, capsys):
    path = tmp_path / "free2.pair"
    assert main(["catalog", "build", "free", "--param", "d=2", "--out", str(path)]) == 0
    capsys.readouterr()
    return str(path)


def test_free_file_passes(capsys, free2):
    code, out, _ = run(capsys, "check", "kummerian", "--file", free2, "--n", "4")
    assert code == 0
    assert "passes at n=1..4; structural certificate: free" in out
    assert verdict_line(out)["outcome"] == "certified_yes"


def test_g1_trivial_torsion(capsys):
    code, out, _ = run(capsys, "check", "kummerian", "--catalog", "G1", "--param", "s=1", "--theta", "trivial", "--n", "2", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"]["outcome"] == "certified_no" and rep["verdict"]["level"] == 2
    assert rep["verdict"]["witness"]["torsion"] == "p^1"


def test_heisenberg_u_sweep(capsys):
    code, out, _ = run(capsys, "check", "kummerian", "--catalog", "heisenberg_U", "--p", "3", "--n", "2", "--sweep-theta")
    assert code == 0
    assert "CertifiedNo for all 27 admissible orientations" in out


def test_heisenberg_smooth(capsys):
    code, out, _ = run(capsys, "check", "smooth", "--catalog", "heisenberg", "--theta", "trivial", "--index-bound", "p", "--n", "2", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"]["outcome"] == "certified_no"
    assert rep["verdict"]["witness"]["chain"] == [[1, 0]]
    assert len(rep["subgroups"]) == 4


def test_smooth_passes(capsys):
    code, out, _ = run(capsys, "check", "smooth", "--catalog", "theta_abelian", "--param", "rank=2", "--index-bound", "p", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"]["outcome"] != "certified_no"
    assert all(s["verdict"]["outcome"] != "certified_no" for s in rep["subgroups"])
    code, out, _ = run(capsys, "check", "smooth", "--catalog", "free", "--param", "d=2", "--index-bound", "p^2", "--format", "json")
    rep = json.loads(out)
    assert rep["verdict"]["outcome"] == "undecided" and rep["verdict"]["evidence"]["passes_at"] == [1, 2, 3]


def test_text_and_json_payloads_agree(capsys):
    argv = ["check", "kummerian", "--catalog", "G4", "--param", "s=1", "--param", "r=0", "--n", "3"]
    _, text, _ = run(capsys, *argv)
    _, js, _ = run(capsys, *argv, "--format", "json")
    assert verdict_line(text) == json.loads(js)["verdict"]


def test_json_roundtrip(capsys):
    _, js, _ = run(capsys, "module", "invariants", "--catalog", "G1", "--param", "s=1", "--n", "3", "--format", "json")
    rep = json.loads(js)
    assert json.loads(json.dumps(rep)) == rep
    assert rep == json.loads(js)


def test_catalog_roundtrip(tmp_path, capsys):
    path = tmp_path / "g4.pair"
    assert main(["catalog", "build", "G4", "--param", "s=0", "--param", "r=1", "--out", str(path)]) == 0
    capsys.readouterr()
    pr = read_pair(str(path))
    assert pr.d == 3
    _, out, _ = run(capsys, "check", "kummerian", "--file", str(path), "--n", "3")
    assert verdict_line(out)["outcome"] == "certified_no"


def test_param_braces(tmp_path, capsys):
    path = tmp_path / "g1.pair"
    path.write_text(json.dumps({
        "p": 3,
        "generators": ["x", "y1", "y2"],
        "relators": ["[y1,y2]", "[y1,x] y1^{-p^s}", "[y2,x] y2^{-p^s}"],
        "theta": {"precision": 3, "values": {}},
    }))
    _, out, _ = run(capsys, "check", "kummerian", "--file", str(path), "--param", "s=1", "--n", "2", "--format", "json")
    v = json.loads(out)["verdict"]
    assert v["outcome"] == "certified_no" and v["witness"]["torsion"] == "p^1"
    code, _, err = run(capsys, "check", "kummerian", "--file", str(path), "--n", "2")
    assert code == 2 and "s" in err


def test_oracle_mode(capsys):
    code, out, _ = run(capsys, "check", "kummerian", "--catalog", "cyclic", "--n", "2", "--oracle", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and all(m.startswith("match") for m in rep["oracle"].values())


def test_subgroups_commands(capsys):
    code, out, _ = run(capsys, "subgroups", "list", "--catalog", "heisenberg", "--format", "json")
    assert code == 0
    code, out, _ = run(capsys, "subgroups", "rewrite", "--catalog", "free", "--param", "d=2", "--phi", "1,0", "--format", "json")
    assert code == 0 and len(json.loads(out)["rewritten"]["generators"]) == 4
    code, _, _ = run(capsys, "subgroups", "rewrite", "--catalog", "free", "--phi", "0,0")
    assert code == 2


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "family", "G1", "--param", "s=1,2", "--n", "3")
    assert code == 0 and "theta(x) = 19 mod 3^3" in out
    # mod 3^2 the twisted orientation of G1(s=2) reduces to 1 and cannot be told apart
    code, out, _ = run(capsys, "classify", "family", "G1", "--row", "s=2", "--n", "2")
    assert code == 1 and "MISMATCH" in out
    code, out, _ = run(capsys, "classify", "family", "G4", "--row", "s=1,r=0", "--row", "s=0,r=1", "--n", "3", "--format", "json")
    assert code == 0


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "check", "kummerian", "--catalog", "nope")[0] == 2
    assert run(capsys, "check", "kummerian", "--file", str(tmp_path / "missing.pair"))[0] == 2
    bad = tmp_path / "bad.pair"
    bad.write_text('{"p": 3, "generators": ["x"], "relators": ["x [y"]}')
    assert run(capsys, "check", "kummerian", "--file", str(bad))[0] == 2
    assert run(capsys, "check", "kummerian", "--catalog", "G4", "--n", "3", "--theta", "sweep", "--cap", "10")[0] == 3
    assert run(capsys, "check", "kummerian", "--catalog", "free", "--n", "0")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["check", "bogus"])
    assert info.value.code == 2
