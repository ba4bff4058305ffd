"""Twisted Fox calculus and cocycle spaces with coefficients Z/p^n(1).

A 1-cocycle on the free group F(x_1..x_d) with values in Z/p^n twisted by
theta is fixed by its values v = (c(x_i)).  For a word w, c(w) is linear in
v, c(w) = fox_row(theta, w) . v, where fox_row obeys

    D(uv) = D(u) + theta(u) D(v),   D(x_i) = e_i,   D(x_i^-1) = -theta(x_i)^-1 e_i.

The cocycle descends to G = F/R exactly when it kills every relator, so
Z1 is the kernel of the matrix of relator rows.  B1 is spanned by the
coboundary of 1, namely (theta(x_i) - 1)_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .padics import PrimeCtx, TruncatedUnit, is_one_unit
from .presentations import Presentation, Word
from .verdicts import Verdict
from .zpn_linalg import FpSubspace, MatrixZpn, Submodule, kernel, mod_p_image


class InvalidOrientation(ValueError):
    def __init__(self, msg: str, relator: Word | None = None, value: int | None = None):
        super().__init__(msg)
        self.relator = relator
        self.value = value


class NotACocycle(ValueError):
    def __init__(self, targets):
        super().__init__(f"{list(targets)} is not a mod-p cocycle")
        self.targets = tuple(targets)


class LiftObstruction(ArithmeticError):
    """A mod-p cocycle with no lift to the requested level."""

    def __init__(self, witness, level: int):
        super().__init__(f"mod-p cocycle {list(witness)} does not lift to level {level}")
        self.witness = tuple(witness)
        self.level = level


@dataclass(frozen=True)
class Orientation:
    """Values theta(x_i) mod p^N, each in 1+pZ (1+4Z when p = 2)."""

    values: tuple[int, ...]
    ctx: PrimeCtx

    def __post_init__(self):
        mod = self.ctx.modulus
        vals = tuple(int(v) % mod for v in self.values)
        object.__setattr__(self, "values", vals)
        for i, v in enumerate(vals):
            if not is_one_unit(v, self.ctx.p, self.ctx.n):
                lead = "1 mod 4" if self.ctx.p == 2 else f"1 mod {self.ctx.p}"
                raise InvalidOrientation(f"theta of generator {i} is {v}, not {lead}")

    @classmethod
    def trivial(cls, d: int, ctx: PrimeCtx) -> "Orientation":
        return cls((1,) * d, ctx)

    @classmethod
    def from_mapping(cls, names: Sequence[str], values: Mapping[str, int], ctx: PrimeCtx) -> "Orientation":
        unknown = set(values) - set(names)
        if unknown:
            raise InvalidOrientation(f"theta given for unknown generators {sorted(unknown)}")
        return cls(tuple(values.get(g, 1) for g in names), ctx)

    @property
    def d(self) -> int:
        return len(self.values)

    @property
    def precision(self) -> int:
        return self.ctx.n

    def unit(self, i: int) -> TruncatedUnit:
        return TruncatedUnit(self.values[i], self.ctx)

    def at(self, n: int) -> "Orientation":
        if n > self.ctx.n:
            raise InvalidOrientation(f"orientation known to precision {self.ctx.n}, asked for {n}")
        return Orientation(self.values, self.ctx.at(n))

    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.values)

    def as_mapping(self, names: Sequence[str]) -> dict[str, int]:
        return dict(zip(names, self.values))


def _theta_int(theta: Orientation, w: Word) -> int:
    mod = theta.ctx.modulus
    out = 1
    for g, e in w.syllables:
        out = out * pow(theta.values[g], e, mod) % mod
    return out


def theta_eval(theta: Orientation, w: Word) -> TruncatedUnit:
    return TruncatedUnit(_theta_int(theta, w), theta.ctx)


def _geom(u: int, k: int, mod: int) -> tuple[int, int]:
    """(1 + u + ... + u^(k-1), u^k) mod `mod`, by halving."""
    if k == 0:
        return 0, 1
    if k == 1:
        return 1, u % mod
    s, uk = _geom(u, k // 2, mod)
    s2 = s * (1 + uk) % mod
    uk2 = uk * uk % mod
    if k % 2:
        s2 = (s2 + uk2) % mod
        uk2 = uk2 * u % mod
    return s2, uk2


@dataclass(frozen=True)
class FoxRow:
    entries: tuple[int, ...]
    ctx: PrimeCtx

    def dot(self, v: Sequence[int]) -> int:
        return sum(a * int(b) for a, b in zip(self.entries, v)) % self.ctx.modulus

    def __add__(self, other: "FoxRow") -> "FoxRow":
        mod = self.ctx.modulus
        return FoxRow(tuple((a + b) % mod for a, b in zip(self.entries, other.entries)), self.ctx)

    def scale(self, c: int) -> "FoxRow":
        mod = self.ctx.modulus
        return FoxRow(tuple(a * int(c) % mod for a in self.entries), self.ctx)

    def __len__(self):
        return len(self.entries)


def fox_row(theta: Orientation, w: Word) -> FoxRow:
    mod = theta.ctx.modulus
    row = [0] * theta.d
    prefix = 1
    for g, e in w.syllables:
        u = theta.values[g]
        if e > 0:
            s, ue = _geom(u, e, mod)
            row[g] = (row[g] + prefix * s) % mod
            prefix = prefix * ue % mod
        else:
            s, uk = _geom(u, -e, mod)
            inv = pow(uk, -1, mod)
            row[g] = (row[g] - prefix * inv * s) % mod
            prefix = prefix * inv % mod
    return FoxRow(tuple(row), theta.ctx)


def evaluate_cocycle(theta: Orientation, v: Sequence[int], w: Word) -> int:
    """c(w) for the cocycle on the free group with generator values v."""
    return fox_row(theta, w).dot(v)


@dataclass(frozen=True)
class CocycleSpaces:
    Z1: Submodule
    B1: Submodule
    n: int
    matrix: MatrixZpn

    @property
    def d(self) -> int:
        return self.Z1.dim


def check_orientation(pres: Presentation, theta: Orientation, n: int | None = None) -> Orientation:
    """Orientation truncated to n, after checking theta(r) = 1 there."""
    if theta.d != pres.d:
        raise InvalidOrientation(f"orientation has {theta.d} values for {pres.d} generators")
    if theta.ctx.p != pres.p:
        raise InvalidOrientation(f"orientation is {theta.ctx.p}-adic, presentation is {pres.p}-adic")
    th = theta if n is None else theta.at(n)
    for r in pres.relators:
        val = _theta_int(th, r)
        if val != 1:
            raise InvalidOrientation(
                f"theta({pres.format(r)}) = {val} mod {th.ctx.modulus}, expected 1", r, val
            )
    return th


def max_valid_precision(pres: Presentation, theta: Orientation) -> int:
    """Largest n <= precision with theta(r) = 1 mod p^n for all relators (0 if none)."""
    best = 0
    for n in range(1, theta.precision + 1):
        try:
            check_orientation(pres, theta, n)
        except InvalidOrientation:
            break
        best = n
    return best


def fox_matrix(pair, n: int) -> MatrixZpn:
    pres = pair.presentation
    th = check_orientation(pres, pair.orientation, n)
    rows = [fox_row(th, r).entries for r in pres.relators]
    return MatrixZpn(rows, th.ctx, pres.d)


def cocycle_spaces(pair, n: int) -> CocycleSpaces:
    M = fox_matrix(pair, n)
    mod = M.ctx.modulus
    th = pair.orientation.at(n)
    B1 = Submodule.span([[(v - 1) % mod for v in th.values]], M.ctx, M.ncols)
    return CocycleSpaces(kernel(M), B1, n, M)


def mod_p_cocycles(pair) -> FpSubspace:
    """Z1 at precision 1, i.e. Hom(G, Z/p) in generator coordinates."""
    return mod_p_image(cocycle_spaces(pair, 1).Z1)


def kummerian_at(pair, n: int) -> Verdict:
    """Refute, or record a pass, of surjectivity H1(Z/p^n(1)) -> H1(Z/p) at level n."""
    if n == 1:
        return Verdict.undecided(1, passes_at=[1], route="surjectivity")
    Z1n = cocycle_spaces(pair, n).Z1
    image = mod_p_image(Z1n)
    target = mod_p_cocycles(pair)
    for b in target.basis:
        if not image.contains(b):
            return Verdict.no(
                n,
                {"kind": "cocycle", "class": list(b), "level": n},
                route="surjectivity",
                image_rank=image.rank,
                mod_p_rank=target.rank,
            )
    return Verdict.undecided(n, passes_at=[n], route="surjectivity", mod_p_rank=target.rank)


def prescribe_cocycle(pair, n: int, targets: Sequence[int]) -> tuple[int, ...]:
    """A level-n cocycle reducing to the given mod-p cocycle.

    Raises NotACocycle if the targets do not form a mod-p cocycle, and
    LiftObstruction (carrying the targets as witness) if no lift exists.
    """
    p = pair.presentation.p
    d = pair.presentation.d
    targets = tuple(int(t) % p for t in targets)
    if len(targets) != d:
        raise ValueError(f"expected {d} target values")
    if not mod_p_cocycles(pair).contains(targets):
        raise NotACocycle(targets)
    Z1n = cocycle_spaces(pair, n).Z1
    coeffs = _solve_fp([[x % p for x in r] for r in Z1n.rows], targets, p)
    if coeffs is None:
        raise LiftObstruction(targets, n)
    mod = p ** n
    v = [0] * d
    for c, r in zip(coeffs, Z1n.rows):
        for j in range(d):
            v[j] = (v[j] + c * r[j]) % mod
    return tuple(v)


def _solve_fp(rows: list[list[int]], target: Sequence[int], p: int) -> list[int] | None:
    """Coefficients c with sum c_j rows_j = target over F_p, or None."""
    k, d = len(rows), len(target)
    # augmented system: columns of the unknowns are the given rows
    A = [[rows[j][i] for j in range(k)] + [target[i] % p] for i in range(d)]
    pivots = []
    lead = 0
    for c in range(k):
        piv = next((i for i in range(lead, d) if A[i][c]), None)
        if piv is None:
            continue
        A[lead], A[piv] = A[piv], A[lead]
        inv = pow(A[lead][c], -1, p)
        A[lead] = [x * inv % p for x in A[lead]]
        for i in range(d):
            if i != lead and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[lead])]
        pivots.append(c)
        lead += 1
    if any(A[i][k] for i in range(lead, d)):
        return None
    sol = [0] * k
    for i, c in enumerate(pivots):
        sol[c] = A[i][k]
    return sol


def cocycle_radical(pair, n: int) -> Submodule:
    """Annihilator of Z1 under sum_i w_i v_i, in twisted-Fox coordinates.

    A word w is killed by every level-n cocycle iff fox_row(theta, w) lies in
    the returned submodule.  For trivial theta these are exponent vectors.
    """
    Z1 = cocycle_spaces(pair, n).Z1
    ctx = pair.orientation.ctx.at(n)
    d = pair.presentation.d
    if Z1.is_zero():
        return Submodule.full(d, ctx)
    return kernel(MatrixZpn(Z1.rows, ctx, d))
