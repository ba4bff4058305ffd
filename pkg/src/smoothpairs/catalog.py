"""Parameterised example pairs with their expected verdicts.

Each entry records what should happen, as regression metadata:

* ``kummerian``: "refuted" or "not_refuted" for the entry's own orientation;
* ``smooth``: same for the index-p smoothness check (None if not recorded);
* ``theta_abelian``: True when the normal-form certificate must fire;
* ``sweep``: the predicate that must refute *every* admissible orientation
  ("kummerian" or "smooth"), or None.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .cocycles import Orientation
from .padics import PrimeCtx, is_prime
from .pairs import CyclotomicPair, semidirect_pair, trivial_pair
from .presentations import GeneratorTable, Presentation, Word


class BadParameters(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    params: dict[str, Any]
    pair: CyclotomicPair
    expected: dict[str, Any] = field(default_factory=dict)
    note: str = ""

    def to_json(self) -> dict:
        return {"id": self.id, "params": self.params, "expected": self.expected, "note": self.note, "pair": self.pair.to_json()}


def _gen(i, e=1):
    return Word.gen(i, e)


def _comm(a: Word, b: Word) -> Word:
    return Word.commutator(a, b)


def _unit(p: int) -> int:
    return 5 if p == 2 else 1 + p


def _nonsquare(p: int) -> int:
    if p == 2:
        return 3
    return next(k for k in range(2, p) if pow(k, (p - 1) // 2, p) == p - 1)


def _need(cond: bool, msg: str):
    if not cond:
        raise BadParameters(msg)


def _pair(p, names, rels, theta, precision) -> CyclotomicPair:
    ctx = PrimeCtx(p, precision)
    pres = Presentation(p, GeneratorTable(names), tuple(rels))
    return CyclotomicPair(pres, Orientation(tuple(theta), ctx))


def _free(p, precision, d=2, theta=None):
    _need(d >= 0, "d must be >= 0")
    names = ["x", "y", "z"][:d] if d <= 3 else [f"x{i}" for i in range(1, d + 1)]
    vals = [1] * d
    for k, v in (theta or {}).items():
        if k not in names:
            raise BadParameters(f"unknown generator {k!r}")
        vals[names.index(k)] = v
    pair = _pair(p, names, [], vals, precision)
    return pair, {"kummerian": "not_refuted", "smooth": "not_refuted", "theta_abelian": d <= 1}, "free pro-p group; any orientation"


def _demushkin2(p, precision, s=1):
    _need(s >= 1 and (p != 2 or s >= 2), "need s >= 1 (s >= 2 when p = 2)")
    q = p ** s
    mod = p ** precision
    rel = _gen(0, q) * _comm(_gen(0), _gen(1))
    pair = _pair(p, ["x", "y"], [rel], [1, pow(1 - q, -1, mod)], precision)
    return pair, {"kummerian": "not_refuted", "smooth": "not_refuted", "theta_abelian": True}, "rank-2 Demushkin relation x^q [x,y]"


def _heisenberg(p, precision):
    x, y = _gen(0), _gen(1)
    z = _comm(x, y)
    pair = _pair(p, ["x", "y"], [_comm(z, x), _comm(z, y)], [1, 1], precision)
    return pair, {"kummerian": "not_refuted", "smooth": "refuted", "theta_abelian": False}, "Heisenberg pro-p group, trivial orientation"


def _heisenberg_U(p, precision):
    t, y, z = _gen(0), _gen(1), _gen(2)
    rels = [_comm(t, z), _comm(y, z), _comm(t, y) * _gen(2, -p)]
    pair = _pair(p, ["t", "y", "z"], rels, [1, 1, 1], precision)
    return (
        pair,
        {"kummerian": "refuted", "sweep": "kummerian", "theta_abelian": False},
        "index-p subgroup of the Heisenberg group containing y; refuted for every orientation",
    )


def _G0(p, precision, s=0):
    _need(s >= 0, "need s >= 0")
    x, y, z = _gen(0), _gen(1), _gen(2)
    rels = [_comm(x, y) * _gen(2, -(p ** s)), _comm(x, z), _comm(y, z)]
    pair = _pair(p, ["x", "y", "z"], rels, [1, 1, 1], precision)
    exp = {"kummerian": "not_refuted" if s == 0 else "refuted", "smooth": "refuted", "sweep": "smooth", "theta_abelian": False}
    return pair, exp, "[x,y] = z^(p^s), z central; not 1-smooth for any orientation"


def _G1(p, precision, s=1, twisted=0):
    _need(s >= 1, "need s >= 1")
    x, y1, y2 = _gen(0), _gen(1), _gen(2)
    q = p ** s
    rels = [_comm(y1, y2), _comm(y1, x) * _gen(1, -q), _comm(y2, x) * _gen(2, -q)]
    mod = p ** precision
    tx = pow(1 + q, -1, mod) if twisted else 1
    pair = _pair(p, ["x", "y1", "y2"], rels, [tx, 1, 1], precision)
    if twisted:
        exp = {"kummerian": "not_refuted", "smooth": "not_refuted", "theta_abelian": True}
    else:
        exp = {"kummerian": "refuted", "theta_abelian": False}
    return pair, exp, "[y_i,x] = y_i^(p^s); theta-abelian exactly for theta(x) = (1+p^s)^-1"


def _G2(p, precision, s=1, r=0, d=0):
    _need(s >= 1 and r >= 0, "need s >= 1, r >= 0")
    x, y1, y2 = _gen(0), _gen(1), _gen(2)
    a, b = p ** s, p ** (s + r)
    rel1 = _comm(y1, x) * ~(_gen(1, a) * (_gen(2, b * d) if d else Word()))
    rel2 = _comm(y2, x) * ~(_gen(1, b) * _gen(2, a))
    pair = _pair(p, ["x", "y1", "y2"], [_comm(y1, y2), rel1, rel2], [1, 1, 1], precision)
    exp = {"kummerian": "refuted", "sweep": "kummerian", "theta_abelian": False}
    return pair, exp, "uniform, action of x on <y1,y2> is not scalar, so never Kummerian"


def _G2rho(p, precision, s=1, r=0, rho=None):
    _need(s >= 0 and r >= 0 and s + r >= 1, "need s, r >= 0 and s + r >= 1")
    rho = _nonsquare(p) if rho is None else rho
    _need(rho % p != 0, "rho must be a p-adic unit")
    x, y1, y2 = _gen(0), _gen(1), _gen(2)
    rel1 = _comm(y1, x) * _gen(2, -(p ** (s + r)) * rho)
    rel2 = _comm(y2, x) * _gen(1, -(p ** s))
    pair = _pair(p, ["x", "y1", "y2"], [_comm(y1, y2), rel1, rel2], [1, 1, 1], precision)
    exp = {"kummerian": "refuted", "sweep": "kummerian", "theta_abelian": False}
    return pair, exp, "like G4 with a unit rho in the exponent; the second relation is read as [y2,x] = y1^(p^s) (editorially normalized)"


def _G4(p, precision, s=1, r=0):
    _need(s >= 0 and r >= 0 and s + r >= 1, "need s, r >= 0 and s + r >= 1")
    x, y1, y2 = _gen(0), _gen(1), _gen(2)
    rel1 = _comm(y1, x) * _gen(2, -(p ** (s + r)))
    rel2 = _comm(y2, x) * _gen(1, -(p ** s))
    pair = _pair(p, ["x", "y1", "y2"], [_comm(y1, y2), rel1, rel2], [1, 1, 1], precision)
    exp = {"kummerian": "refuted", "sweep": "kummerian", "theta_abelian": False}
    return pair, exp, "[y1,x] = y2^(p^(s+r)), [y2,x] = y1^(p^s); not Kummerian for any orientation"


def _theta_abelian(p, precision, rank=1, u=None):
    _need(rank >= 0, "rank must be >= 0")
    u = _unit(p) if u is None else u
    base = _pair(p, ["x"], [], [u], precision)
    return semidirect_pair(rank, base), {"kummerian": "not_refuted", "smooth": "not_refuted", "theta_abelian": True}, "Z_p^rank x| Z_p with x acting by theta(x)"


def _trivial(p, precision):
    return trivial_pair(p, precision), {"kummerian": "not_refuted", "smooth": "not_refuted", "theta_abelian": True}, "trivial group"


def _cyclic(p, precision):
    pair = _pair(p, ["x"], [_gen(0, p)], [1], precision)
    return pair, {"kummerian": "refuted", "sweep": "kummerian", "theta_abelian": False}, "cyclic group of order p"


_BUILDERS: dict[str, tuple[Callable, dict[str, Any]]] = {
    "free": (_free, {"d": 2}),
    "demushkin2": (_demushkin2, {"s": 1}),
    "heisenberg": (_heisenberg, {}),
    "heisenberg_U": (_heisenberg_U, {}),
    "G0": (_G0, {"s": 0}),
    "G1": (_G1, {"s": 1, "twisted": 0}),
    "G2": (_G2, {"s": 1, "r": 0, "d": 0}),
    "G2rho": (_G2rho, {"s": 1, "r": 0, "rho": None}),
    "G4": (_G4, {"s": 1, "r": 0}),
    "theta_abelian": (_theta_abelian, {"rank": 1, "u": None}),
    "trivial": (_trivial, {}),
    "cyclic": (_cyclic, {}),
}

FAMILIES = ("G0", "G1", "G2", "G4")


def list_ids() -> list[str]:
    return list(_BUILDERS)


def parameters(entry_id: str) -> dict[str, Any]:
    if entry_id not in _BUILDERS:
        raise BadParameters(f"unknown catalog id {entry_id!r}; known: {', '.join(_BUILDERS)}")
    return dict(_BUILDERS[entry_id][1])


def entry(entry_id: str, p: int = 3, precision: int = 4, **params) -> CatalogEntry:
    defaults = parameters(entry_id)
    if not isinstance(p, int) or not is_prime(p):
        raise BadParameters(f"p must be prime, got {p!r}")
    if precision < 1:
        raise BadParameters("precision must be >= 1")
    unknown = set(params) - set(defaults) - {"theta"}
    if unknown:
        raise BadParameters(f"{entry_id} takes {sorted(defaults)}, got {sorted(unknown)}")
    if "theta" in params and entry_id != "free":
        raise BadParameters("per-generator theta is only a catalog parameter of 'free'")
    merged = {**defaults, **params}
    builder = _BUILDERS[entry_id][0]
    try:
        pair, expected, note = builder(p, precision, **merged)
    except BadParameters:
        raise
    except ValueError as exc:
        raise BadParameters(str(exc)) from exc
    shown = {k: v for k, v in merged.items() if v is not None}
    return CatalogEntry(entry_id, {"p": p, **shown}, pair, expected, note)


def build(entry_id: str, p: int = 3, precision: int = 4, **params) -> CyclotomicPair:
    return entry(entry_id, p, precision, **params).pair


def regression_entries(precision: int = 4) -> list[CatalogEntry]:
    """The fixed corpus whose expected metadata is checked by the test suite."""
    corpus = [
        ("free", 2, {"d": 1}), ("free", 3, {"d": 2}), ("free", 3, {"d": 3}), ("free", 5, {"d": 2}),
        ("demushkin2", 3, {"s": 1}), ("demushkin2", 3, {"s": 2}), ("demushkin2", 2, {"s": 2}),
        ("heisenberg", 3, {}), ("heisenberg", 2, {}), ("heisenberg_U", 3, {}),
        ("G0", 3, {"s": 0}), ("G0", 3, {"s": 1}),
        ("G1", 3, {"s": 1}), ("G1", 3, {"s": 1, "twisted": 1}), ("G1", 3, {"s": 2, "twisted": 1}),
        ("G2", 3, {"s": 1, "r": 0, "d": 0}), ("G2", 3, {"s": 1, "r": 1, "d": 1}),
        ("G2rho", 3, {"s": 1, "r": 0}),
        ("G4", 3, {"s": 1, "r": 0}), ("G4", 3, {"s": 0, "r": 1}),
        ("theta_abelian", 3, {"rank": 1}), ("theta_abelian", 3, {"rank": 2}), ("theta_abelian", 2, {"rank": 2}),
        ("trivial", 3, {}), ("cyclic", 2, {}), ("cyclic", 3, {}),
    ]
    return [entry(i, p, precision, **kw) for i, p, kw in corpus]
