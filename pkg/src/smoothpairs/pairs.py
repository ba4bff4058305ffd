"""Cyclotomic pairs (G, theta), their constructions and the Kummerian verdicts.

Two refutation routes are run side by side at every level n:

* surjectivity: the mod-p reduction of Z1 at level n misses a mod-p cocycle;
* torsion: the twisted Fox matrix has a diagonal invariant p^a with 0 < a < n.

They are mathematically equivalent, so any disagreement is raised as
:class:`InternalInconsistency` rather than reported as a verdict.
"""

from __future__ import annotations

import ast
import json
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .cocycles import (
    InvalidOrientation,
    Orientation,
    check_orientation,
    cocycle_spaces,
    fox_matrix,
    kummerian_at,
    mod_p_cocycles,
)
from .padics import PrimeCtx
from .presentations import GeneratorTable, Presentation, Word, parse_word, simplify
from .verdicts import InternalInconsistency, Verdict
from .zpn_linalg import DiagonalProfile, MatrixZpn, diagonal_invariants


class NotInKernel(ValueError):
    def __init__(self, word: str, value: int):
        super().__init__(f"theta({word}) = {value}, so it is not in the kernel of theta")
        self.word = word
        self.value = value


class PairFormatError(ValueError):
    pass


@dataclass(frozen=True)
class CyclotomicPair:
    presentation: Presentation
    orientation: Orientation

    def __post_init__(self):
        check_orientation(self.presentation, self.orientation)

    @classmethod
    def build(
        cls,
        p: int,
        generators: Sequence[str],
        relators: Sequence[str | Word],
        theta: Mapping[str, int] | None = None,
        precision: int = 3,
    ) -> "CyclotomicPair":
        table = GeneratorTable(generators)
        rels = tuple(r if isinstance(r, Word) else parse_word(r, table) for r in relators)
        pres = Presentation(p, table, rels)
        ctx = PrimeCtx(p, precision)
        return cls(pres, Orientation.from_mapping(list(table), theta or {}, ctx))

    @property
    def p(self) -> int:
        return self.presentation.p

    @property
    def d(self) -> int:
        return self.presentation.d

    @property
    def precision(self) -> int:
        return self.orientation.precision

    @property
    def generators(self) -> list[str]:
        return list(self.presentation.generators)

    def theta_map(self) -> dict[str, int]:
        return self.orientation.as_mapping(self.generators)

    def at(self, n: int) -> "CyclotomicPair":
        return CyclotomicPair(self.presentation, self.orientation.at(n))

    def with_orientation(self, theta: Orientation) -> "CyclotomicPair":
        return CyclotomicPair(self.presentation, theta)

    def to_json(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "generators": self.generators,
            "relators": self.presentation.relator_strings(),
            "theta": {"precision": self.precision, "values": self.theta_map()},
        }

    def __str__(self):
        th = ", ".join(f"{g}:{v}" for g, v in self.theta_map().items())
        return f"{self.presentation} with theta {{{th}}} mod {self.p}^{self.precision}"


# pair files ---------------------------------------------------------------

_BRACE = re.compile(r"\{([^{}]*)\}")
_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Pow: pow,
    ast.FloorDiv: operator.floordiv,
}


def eval_int_expr(text: str, bindings: Mapping[str, int]) -> int:
    """Integer arithmetic with + - * // and ^ (as power) over named bindings."""
    try:
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise PairFormatError(f"bad expression {{{text}}}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in bindings:
                raise PairFormatError(f"unbound parameter {node.id!r} in {{{text}}}")
            return int(bindings[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Pow) and b < 0:
                raise PairFormatError(f"negative power in {{{text}}}")
            return _BINOPS[type(node.op)](a, b)
        raise PairFormatError(f"unsupported construct in {{{text}}}")

    return ev(tree)


def expand_braces(text: str, bindings: Mapping[str, int]) -> str:
    """Replace every ``{expr}`` by its decimal value."""
    return _BRACE.sub(lambda m: str(eval_int_expr(m.group(1), bindings)), text)


def pair_from_json(data: Mapping[str, Any], bindings: Mapping[str, int] | None = None) -> CyclotomicPair:
    try:
        p = int(data["p"])
        gens = list(data["generators"])
        rels = list(data.get("relators", []))
        theta = data.get("theta", {}) or {}
        precision = int(theta.get("precision", 3))
        values = {str(k): int(v) for k, v in (theta.get("values", {}) or {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise PairFormatError(f"malformed pair: {exc}") from exc
    env = {"p": p, **(bindings or {})}
    rels = [expand_braces(r, env) for r in rels]
    return CyclotomicPair.build(p, gens, rels, values, precision)


def read_pair(path: str, bindings: Mapping[str, int] | None = None) -> CyclotomicPair:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise PairFormatError(f"{path}: {exc}") from exc
    return pair_from_json(data, bindings)


def write_pair(pair: CyclotomicPair, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(pair.to_json(), fh, indent=2)
        fh.write("\n")


# constructions ------------------------------------------------------------


def simplify_pair(pair: CyclotomicPair) -> tuple[CyclotomicPair, list[Word], list[int]]:
    pres, images, alive = simplify(pair.presentation)
    theta = Orientation(tuple(pair.orientation.values[i] for i in alive), pair.orientation.ctx)
    return CyclotomicPair(pres, theta), images, alive


def quotient_pair(pair: CyclotomicPair, N: Iterable[Word | str]) -> CyclotomicPair:
    pres = pair.presentation
    words = [w if isinstance(w, Word) else pres.word(w) for w in N]
    for w in words:
        val = 1
        mod = pair.orientation.ctx.modulus
        for g, e in w.syllables:
            val = val * pow(pair.orientation.values[g], e, mod) % mod
        if val != 1:
            raise NotInKernel(pres.format(w), val)
    return CyclotomicPair(pres.with_relators(words), pair.orientation)


def _fresh_names(prefix: str, r: int, taken: set[str]) -> list[str]:
    if r == 1 and prefix not in taken:
        return [prefix]
    names, k = [], 1
    while len(names) < r:
        if f"{prefix}{k}" not in taken:
            names.append(f"{prefix}{k}")
        k += 1
    return names


def semidirect_pair(r: int, base: CyclotomicPair) -> CyclotomicPair:
    """A x| base with A = Z_p^r, g a g^-1 = a^theta(g), theta(a) = 1."""
    if r < 0:
        raise ValueError("rank must be >= 0")
    base_names = base.generators
    a_names = _fresh_names("a", r, set(base_names))
    names = a_names + base_names
    d0 = base.d
    shift = {i: i + r for i in range(d0)}
    rels = [w.reindex(shift) for w in base.presentation.relators]
    for i in range(r):
        for j in range(i + 1, r):
            rels.append(Word.commutator(Word.gen(i), Word.gen(j)))
    for g in range(d0):
        e = base.orientation.values[g]
        for i in range(r):
            rels.append(Word.gen(g + r) * Word.gen(i) * Word.gen(g + r, -1) * Word.gen(i, -e))
    pres = Presentation(base.p, GeneratorTable(names), tuple(rels))
    theta = Orientation((1,) * r + base.orientation.values, base.orientation.ctx)
    return CyclotomicPair(pres, theta)


def trivial_pair(p: int, precision: int = 3) -> CyclotomicPair:
    return CyclotomicPair(Presentation(p, GeneratorTable([]), ()), Orientation((), PrimeCtx(p, precision)))


# theta-abelianisation module ----------------------------------------------


@dataclass(frozen=True)
class ThetaAbModule:
    matrix: MatrixZpn
    profile: DiagonalProfile
    in_kernel: tuple[bool, ...]
    n: int

    def torsion_certificate(self) -> int | None:
        t = self.profile.torsion
        return t[0] if t else None

    def to_json(self) -> dict:
        out = self.profile.to_json()
        out["in_kernel_of_theta"] = list(self.in_kernel)
        out["matrix"] = [list(r) for r in self.matrix.rows]
        return out


def theta_ab_module(pair: CyclotomicPair, n: int) -> ThetaAbModule:
    M = fox_matrix(pair, n)
    th = pair.orientation.at(n)
    return ThetaAbModule(M, diagonal_invariants(M), tuple(v == 1 for v in th.values), n)


def torsion_at(pair: CyclotomicPair, n: int) -> Verdict:
    mod = theta_ab_module(pair, n)
    a = mod.torsion_certificate()
    if a is not None:
        return Verdict.no(
            n,
            {"kind": "torsion", "exponent": a, "invariant": f"p^{a}", "level": n},
            route="torsion",
            profile=list(mod.profile.exponents),
        )
    return Verdict.undecided(n, passes_at=[n], route="torsion", profile=list(mod.profile.exponents))


def _level_range(pair: CyclotomicPair, n_max: int) -> range:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > pair.precision:
        raise InvalidOrientation(f"orientation known to precision {pair.precision}, asked for level {n_max}")
    return range(1, n_max + 1)


def refutation_levels(pair: CyclotomicPair, n_max: int) -> tuple[int | None, int | None]:
    """First refuting level by each route independently (None if none)."""
    a = b = None
    for n in _level_range(pair, n_max):
        if a is None and kummerian_at(pair, n).refuted:
            a = n
        if b is None and torsion_at(pair, n).refuted:
            b = n
        if a is not None and b is not None:
            break
    return a, b


def structural_certificate(pair: CyclotomicPair) -> str | None:
    """A reason the pair is Kummerian outright, or None."""
    if not pair.presentation.relators:
        return f"free pro-{pair.p} group of rank {pair.d}"
    if mod_p_cocycles(pair).rank == 0:
        return "trivial group (no nonzero mod-p cocycle)"
    simp, _, _ = simplify_pair(pair)
    if not simp.presentation.relators:
        return f"free pro-{pair.p} group of rank {simp.d} after Tietze simplification"
    ab = theta_abelian_form(simp)
    if ab is not None:
        return ab
    return None


def kummerian_verdict(pair: CyclotomicPair, n_max: int) -> Verdict:
    passes = []
    for n in _level_range(pair, n_max):
        va = kummerian_at(pair, n)
        vb = torsion_at(pair, n)
        if va.refuted != vb.refuted:
            raise InternalInconsistency(
                f"level {n}: surjectivity says {va.outcome}, torsion says {vb.outcome} for {pair}"
            )
        if va.refuted:
            witness = dict(va.witness)
            witness["torsion"] = vb.witness["invariant"]
            return Verdict.no(n, witness, passes_at=passes, profile=vb.evidence["profile"])
        passes.append(n)
    cert = structural_certificate(pair)
    if cert is not None:
        return Verdict.yes(cert, n_max, passes_at=passes)
    return Verdict.undecided(n_max, passes_at=passes, note="all levels pass; no structural certificate")


# theta-abelian recognition ------------------------------------------------


def _conjugation(w: Word, g: int) -> tuple[int, int, Fraction] | None:
    """Read w cyclically as g^e h^k g^-e h^m with |e| = 1.

    Then g^e h g^-e = h^lam with lam = -m/k (k must be prime to p, checked
    by the caller).  Returns (e, h, lam).
    """
    syl = w.syllables
    if len(syl) != 4:
        return None
    for i in range(4):
        rot = syl[i:] + syl[:i]
        (g0, e), (h, k), (g1, e1), (h1, m) = rot
        if g0 == g and g1 == g and h == h1 and h != g and abs(e) == 1 and e1 == -e:
            return e, h, Fraction(-m, k)
    return None


def theta_abelian_form(pair: CyclotomicPair) -> str | None:
    """Certificate string if the presentation is Z_p^r x| <x> in normal form.

    Generators with theta = 1 form A; at most one other generator x.  Every
    relator must state either that two A-generators commute or that x acts
    on an A-generator a by a^lam with lam = theta(x) at the given precision,
    and every such relation must be present.
    """
    pres, th = pair.presentation, pair.orientation
    p, mod = pair.p, th.ctx.modulus
    A = [i for i in range(pres.d) if th.values[i] == 1]
    C = [i for i in range(pres.d) if th.values[i] != 1]
    if len(C) > 1:
        return None
    x = C[0] if C else None
    commuting: set[frozenset] = set()
    acted: set[int] = set()
    for r in pres.relators:
        r = r.cyclic_reduce()
        ok = False
        for g in A + C:
            c = _conjugation(r, g)
            if c is None:
                continue
            e, h, lam = c
            if lam.denominator % p == 0 or lam.numerator == 0:
                continue
            if h not in A:
                continue
            if g in A and lam == 1:
                commuting.add(frozenset((g, h)))
                ok = True
                break
            if g == x:
                lam_mod = lam.numerator * pow(lam.denominator, -1, mod) % mod
                if lam_mod == pow(th.values[x], e, mod):
                    acted.add(h)
                    ok = True
                    break
        if not ok:
            return None
    need = {frozenset((a, b)) for i, a in enumerate(A) for b in A[i + 1:]}
    if not need <= commuting:
        return None
    if x is not None and acted != set(A):
        return None
    if x is None:
        return f"free abelian pro-{p} group of rank {len(A)} with trivial theta"
    return (
        f"theta-abelian normal form: Z_{p}^{len(A)} x| <{pres.generators[x]}>, "
        f"theta({pres.generators[x]}) = {th.values[x]} mod {p}^{th.ctx.n}"
    )


def theta_abelian_certify(pair: CyclotomicPair, n_max: int | None = None) -> Verdict:
    n_max = pair.precision if n_max is None else n_max
    simp, _, _ = simplify_pair(pair)
    form = theta_abelian_form(simp)
    verdict = kummerian_verdict(pair, n_max)
    if form is not None:
        if verdict.refuted:
            raise InternalInconsistency(f"theta-abelian normal form but refuted: {pair}")
        return Verdict.yes(form, n_max, passes_at=verdict.evidence.get("passes_at", []))
    if verdict.refuted:
        return verdict
    return Verdict.undecided(n_max, passes_at=verdict.evidence.get("passes_at", []), note="no theta-abelian normal form found")


def cocycle_summary(pair: CyclotomicPair, n: int) -> dict:
    sp = cocycle_spaces(pair, n)
    return {
        "level": n,
        "Z1": [list(r) for r in sp.Z1.rows],
        "B1": [list(r) for r in sp.B1.rows],
        "Z1_order": sp.Z1.order(),
    }
