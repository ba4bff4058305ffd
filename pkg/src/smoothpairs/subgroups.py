"""Index-p subgroups, Reidemeister-Schreier rewriting and 1-smoothness checks.

A subgroup of index p is the kernel of a nonzero phi in Hom(G, Z/p), taken
up to scalars.  With a generator t having phi(t) != 0 the powers of t give a
Schreier transversal T_0..T_{p-1} with phi(T_k) = k, and the subgroup is
generated by s_{k,i} = T_k x_i T_{k+phi(x_i)}^-1 (trivial ones dropped).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Sequence

from .cocycles import InvalidOrientation, Orientation, mod_p_cocycles
from .padics import PrimeCtx, one_units
from .pairs import CyclotomicPair, kummerian_verdict, simplify_pair, structural_certificate
from .presentations import GeneratorTable, Presentation, Word
from .verdicts import Verdict


class SweepTooLarge(RuntimeError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} candidate orientations exceed the cap {cap}")
        self.count = count
        self.cap = cap


class BadSubgroup(ValueError):
    pass


@dataclass(frozen=True)
class IndexPSubgroup:
    """Kernel of phi, with transversal powers of generator t.

    ``style`` picks the transversal words: "positive" uses t^j with
    0 <= j < p, "negative" uses t^(j-p) for j > 0.
    """

    phi: tuple[int, ...]
    t: int
    style: str = "positive"

    def transversal(self, p: int) -> list[Word]:
        c = self.phi[self.t] % p
        inv = pow(c, -1, p)
        out = []
        for k in range(p):
            j = k * inv % p
            if self.style == "negative" and j:
                j -= p
            out.append(Word.gen(self.t, j) if j else Word())
        return out

    def with_transversal(self, t: int | None = None, style: str | None = None) -> "IndexPSubgroup":
        return IndexPSubgroup(self.phi, self.t if t is None else t, style or self.style)


def _normalize(phi: Sequence[int], p: int) -> tuple[int, ...]:
    lead = next(x for x in phi if x % p)
    inv = pow(lead, -1, p)
    return tuple(x * inv % p for x in phi)


def enumerate_index_p(pair: CyclotomicPair) -> list[IndexPSubgroup]:
    """One entry per nonzero element of Hom(G, Z/p) up to scalars.

    Coordinate functionals come first (by generator), then the rest by support.
    """
    p = pair.p
    basis = mod_p_cocycles(pair).basis
    seen = set()
    for coeffs in product(range(p), repeat=len(basis)):
        if not any(coeffs):
            continue
        v = [0] * pair.d
        for c, b in zip(coeffs, basis):
            for j in range(pair.d):
                v[j] = (v[j] + c * b[j]) % p
        seen.add(_normalize(v, p))
    out = []
    for phi in sorted(seen, key=lambda f: (sum(1 for x in f if x), tuple(x == 0 for x in f), f)):
        t = next(i for i, x in enumerate(phi) if x)
        out.append(IndexPSubgroup(phi, t))
    return out


@dataclass(frozen=True)
class RewrittenPair:
    pair: CyclotomicPair
    subgroup: IndexPSubgroup
    schreier_words: tuple[Word, ...]
    parent: CyclotomicPair

    def simplified(self) -> CyclotomicPair:
        return simplify_pair(self.pair)[0]

    def embed(self, w: Word) -> Word:
        """Image in the parent free group of a word in the Schreier generators."""
        return w.substitute(self.schreier_words)


def rewrite(pair: CyclotomicPair, U: IndexPSubgroup) -> RewrittenPair:
    p, d = pair.p, pair.d
    phi = tuple(x % p for x in U.phi)
    if len(phi) != d or not any(phi):
        raise BadSubgroup("phi must be a nonzero vector with one entry per generator")
    if phi[U.t] == 0:
        raise BadSubgroup("transversal generator must have phi(t) != 0")
    if not mod_p_cocycles(pair).contains(phi):
        raise BadSubgroup(f"{list(phi)} is not a homomorphism G -> Z/{p}")
    T = U.transversal(p)
    names = list(pair.presentation.generators)
    index: dict[tuple[int, int], int] = {}
    words: list[Word] = []
    gen_names: list[str] = []
    for k in range(p):
        for i in range(d):
            w = T[k] * Word.gen(i) * ~T[(k + phi[i]) % p]
            if w.is_identity():
                continue
            index[(k, i)] = len(words)
            words.append(w)
            gen_names.append(f"u_{k}_{names[i]}")

    def letter(k: int, g: int, sign: int) -> tuple[Word, int]:
        if sign > 0:
            j = index.get((k, g))
            return (Word.gen(j) if j is not None else Word()), (k + phi[g]) % p
        k0 = (k - phi[g]) % p
        j = index.get((k0, g))
        return (Word.gen(j, -1) if j is not None else Word()), k0

    def syllable(k: int, g: int, e: int) -> tuple[Word, int]:
        sign = 1 if e > 0 else -1
        steps = abs(e)
        if phi[g] == 0:
            w, _ = letter(k, g, sign)
            return w ** steps, k
        cycle = Word()
        kk = k
        for _ in range(p):
            w, kk = letter(kk, g, sign)
            cycle = cycle * w
        out = cycle ** (steps // p)
        for _ in range(steps % p):
            w, kk = letter(kk, g, sign)
            out = out * w
        return out, kk

    rels = []
    for r in pair.presentation.relators:
        for k in range(p):
            kk, acc = k, Word()
            for g, e in r.syllables:
                w, kk = syllable(kk, g, e)
                acc = acc * w
            if kk != k:
                raise BadSubgroup("relator leaves its coset; phi is not a homomorphism")
            rels.append(acc)
    pres = Presentation(p, GeneratorTable(gen_names), tuple(rels))
    mod = pair.orientation.ctx.modulus
    vals = []
    for w in words:
        v = 1
        for g, e in w.syllables:
            v = v * pow(pair.orientation.values[g], e, mod) % mod
        vals.append(v)
    theta = Orientation(tuple(vals), pair.orientation.ctx)
    return RewrittenPair(CyclotomicPair(pres, theta), U, tuple(words), pair)


def _key(pair: CyclotomicPair) -> tuple:
    return (tuple(pair.generators), pair.presentation.relators, pair.orientation.values)


def subgroup_tower(pair: CyclotomicPair, k: int) -> list[tuple[tuple, CyclotomicPair]]:
    """G and its subgroups reached by k successive index-p steps.

    Each entry is (chain of phis, simplified pair).  Identical rewritten pairs
    are merged; no coarser deduplication is done.
    """
    if k < 0:
        raise ValueError("index exponent must be >= 0")
    out: list[tuple[tuple, CyclotomicPair]] = [((), pair)]
    frontier = [((), pair)]
    seen = {_key(pair)}
    for _ in range(k):
        nxt = []
        for chain, H in frontier:
            if H.d == 0:
                continue
            for U in enumerate_index_p(H):
                sub = rewrite(H, U).simplified()
                key = _key(sub)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((chain + (U.phi,), sub))
        out.extend(nxt)
        frontier = nxt
    return out


def smooth_check(pair: CyclotomicPair, index_exponent: int = 1, n_max: int = 3) -> Verdict:
    """Refute 1-smoothness inside subgroups of index <= p^index_exponent."""
    checked = 0
    for chain, H in subgroup_tower(pair, index_exponent):
        v = kummerian_verdict(H, n_max)
        checked += 1
        if v.refuted:
            witness = {
                "kind": "subgroup",
                "chain": [list(c) for c in chain],
                "index": pair.p ** len(chain),
                "subgroup": H.to_json(),
                "level": v.level,
                "inner": v.witness,
            }
            return Verdict.no(v.level, witness, index_bound=pair.p ** index_exponent, checked=checked)
    ev = {"index_bound": pair.p ** index_exponent, "checked": checked, "passes_at": list(range(1, n_max + 1))}
    cert = structural_certificate(pair)
    if cert is not None:
        ev["structural"] = cert
    return Verdict.undecided(n_max, **ev)


def orientation_sweep(
    presentation: Presentation,
    n: int,
    predicate: Callable[[CyclotomicPair], Verdict] | None = None,
    cap: int = 10**6,
) -> list[tuple[Orientation, Verdict]]:
    """Evaluate the predicate on every orientation mod p^n valid on the relators."""
    if predicate is None:
        predicate = lambda pr: kummerian_verdict(pr, n)  # noqa: E731
    p, d = presentation.p, presentation.d
    units = one_units(p, n)
    count = len(units) ** d
    if count > cap:
        raise SweepTooLarge(count, cap)
    ctx = PrimeCtx(p, n)
    out = []
    for vals in product(units, repeat=d):
        theta = Orientation(vals, ctx)
        try:
            pr = CyclotomicPair(presentation, theta)
        except InvalidOrientation:
            continue
        out.append((theta, predicate(pr)))
    out.sort(key=lambda item: item[0].values)
    return out


def sweep_candidates(presentation: Presentation, n: int) -> int:
    return len(one_units(presentation.p, n)) ** presentation.d


def subgroup_report(pair: CyclotomicPair, n_max: int, subgroups: Iterable[IndexPSubgroup] | None = None) -> list[dict]:
    entries = []
    for U in subgroups if subgroups is not None else enumerate_index_p(pair):
        H = rewrite(pair, U).simplified()
        entries.append(
            {
                "phi": list(U.phi),
                "presentation": H.to_json(),
                "verdict": kummerian_verdict(H, n_max).to_json(),
            }
        )
    return entries
