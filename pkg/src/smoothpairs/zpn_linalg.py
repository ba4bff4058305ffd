"""Linear algebra over Z/p^n.

Z/p^n is a local ring with zero divisors, so row modules are canonicalised by
the Howell form rather than plain echelon form: rows in echelon order, every
pivot a power p^a, entries above a pivot reduced into [0, p^a), and the Howell
property (the rows below pivot i span everything in the module that vanishes
on columns 0..c_i).  Two matrices have the same row module exactly when their
Howell forms agree.

Entries are stored as plain ints in [0, p^n) for speed; the context object
only travels alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt, log
from typing import Iterable, Iterator, Sequence

from .padics import ContextMismatch, PrimeCtx, TruncatedInt, vp


def _val(x: int, p: int, n: int) -> int:
    return vp(x, p, n)


def _unit_part_inverse(x: int, a: int, p: int, mod: int) -> int:
    return pow(x // p ** a, -1, mod)


class MatrixZpn:
    """Dense rows x cols matrix over Z/p^n."""

    def __init__(self, rows: Iterable[Sequence[int]], ctx: PrimeCtx, ncols: int | None = None):
        mod = ctx.modulus
        self.ctx = ctx
        self.rows = tuple(tuple(int(x) % mod for x in r) for r in rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def entry(self, i: int, j: int) -> TruncatedInt:
        return TruncatedInt(self.rows[i][j], self.ctx)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        mod = self.ctx.modulus
        return tuple(sum(a * b for a, b in zip(r, v)) % mod for r in self.rows)

    def truncate(self, n: int) -> "MatrixZpn":
        return MatrixZpn(self.rows, self.ctx.at(n), self.ncols)

    def transpose(self) -> "MatrixZpn":
        return MatrixZpn([tuple(r[j] for r in self.rows) for j in range(self.ncols)], self.ctx, self.nrows)

    def __eq__(self, other):
        return isinstance(other, MatrixZpn) and (self.ctx, self.ncols, self.rows) == (other.ctx, other.ncols, other.rows)

    def __repr__(self):
        return f"MatrixZpn({[list(r) for r in self.rows]}, p={self.ctx.p}, n={self.ctx.n})"

    @classmethod
    def identity(cls, d: int, ctx: PrimeCtx) -> "MatrixZpn":
        return cls([[int(i == j) for j in range(d)] for i in range(d)], ctx, d)

    @classmethod
    def zeros(cls, m: int, d: int, ctx: PrimeCtx) -> "MatrixZpn":
        return cls([[0] * d for _ in range(m)], ctx, d)


def _howell_rows(rows: list[list[int]], ncols: int, p: int, n: int) -> list[tuple[int, ...]]:
    mod = p ** n
    pool = [list(r) for r in rows if any(r)]
    out: list[list[int]] = []
    pivots: list[tuple[int, int]] = []
    for c in range(ncols):
        best, best_v = None, n
        for k, r in enumerate(pool):
            if r[c]:
                v = _val(r[c], p, n)
                if v < best_v:
                    best, best_v = k, v
        if best is None:
            continue
        piv = pool.pop(best)
        a = best_v
        u = _unit_part_inverse(piv[c], a, p, mod)
        piv = [x * u % mod for x in piv]
        pa = p ** a
        for r in pool:
            if r[c]:
                f = r[c] // pa
                for j in range(c, ncols):
                    r[j] = (r[j] - f * piv[j]) % mod
        extra = [x * p ** (n - a) % mod for x in piv]
        pool = [r for r in pool if any(r)]
        if any(extra):
            pool.append(extra)
        out.append(piv)
        pivots.append((c, pa))
    for i, (c, pa) in enumerate(pivots):
        for j in range(i):
            f = out[j][c] // pa
            if f:
                out[j] = [(x - f * y) % mod for x, y in zip(out[j], out[i])]
    return [tuple(r) for r in out]


@dataclass(frozen=True)
class Submodule:
    """A submodule of (Z/p^n)^dim, held as its Howell rows."""

    rows: tuple[tuple[int, ...], ...]
    ctx: PrimeCtx
    dim: int

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], ctx: PrimeCtx, dim: int) -> "Submodule":
        mod = ctx.modulus
        rows = [[int(x) % mod for x in v] for v in vectors]
        if any(len(r) != dim for r in rows):
            raise ValueError("vector of wrong length")
        return cls(tuple(_howell_rows(rows, dim, ctx.p, ctx.n)), ctx, dim)

    @classmethod
    def zero(cls, dim: int, ctx: PrimeCtx) -> "Submodule":
        return cls((), ctx, dim)

    @classmethod
    def full(cls, dim: int, ctx: PrimeCtx) -> "Submodule":
        return cls.span([[int(i == j) for j in range(dim)] for i in range(dim)], ctx, dim)

    def _check(self, other: "Submodule"):
        if other.ctx != self.ctx or other.dim != self.dim:
            raise ContextMismatch("submodules live in different ambient modules")

    def residue(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Reduce v by the Howell rows; None if v is not in the module."""
        mod = self.ctx.modulus
        w = [int(x) % mod for x in v]
        for r in self.rows:
            c = next(j for j, x in enumerate(r) if x)
            pa = r[c]
            if w[c] % pa:
                return None
            f = w[c] // pa
            if f:
                w = [(x - f * y) % mod for x, y in zip(w, r)]
        return tuple(w)

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.dim:
            raise ValueError("vector of wrong length")
        res = self.residue(v)
        return res is not None and not any(res)

    __contains__ = contains

    def __le__(self, other: "Submodule") -> bool:
        self._check(other)
        return all(other.contains(r) for r in self.rows)

    def __add__(self, other: "Submodule") -> "Submodule":
        self._check(other)
        return Submodule.span(self.rows + other.rows, self.ctx, self.dim)

    def is_zero(self) -> bool:
        return not self.rows

    def is_full(self) -> bool:
        return all(r[i] == 1 for i, r in enumerate(self.rows)) and len(self.rows) == self.dim

    def order(self) -> int:
        """Number of elements, from the pivots: prod of p^(n - a)."""
        out = 1
        for r in self.rows:
            piv = next(x for x in r if x)
            out *= self.ctx.modulus // piv
        return out

    def truncate(self, n: int) -> "Submodule":
        if n > self.ctx.n:
            raise ValueError("cannot raise precision")
        return Submodule.span(self.rows, self.ctx.at(n), self.dim)

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements (only sensible for tiny modules)."""
        mod = self.ctx.modulus
        ranges = []
        for r in self.rows:
            piv = next(x for x in r if x)
            ranges.append(range(mod // piv))
        from itertools import product

        seen = set()
        for coeffs in product(*ranges):
            v = [0] * self.dim
            for c, r in zip(coeffs, self.rows):
                if c:
                    for j, x in enumerate(r):
                        v[j] = (v[j] + c * x) % mod
            t = tuple(v)
            if t not in seen:
                seen.add(t)
                yield t

    def __repr__(self):
        return f"Submodule({[list(r) for r in self.rows]}, p={self.ctx.p}, n={self.ctx.n}, dim={self.dim})"


def howell_form(M: MatrixZpn) -> Submodule:
    return Submodule(tuple(_howell_rows([list(r) for r in M.rows], M.ncols, M.ctx.p, M.ctx.n)), M.ctx, M.ncols)


def kernel(M: MatrixZpn) -> Submodule:
    """All v with M v = 0, as a submodule of (Z/p^n)^cols."""
    m, d = M.shape
    aug = [[M.rows[i][j] for i in range(m)] + [int(j == k) for k in range(d)] for j in range(d)]
    hw = _howell_rows(aug, m + d, M.ctx.p, M.ctx.n)
    ker = [r[m:] for r in hw if not any(r[:m])]
    return Submodule(tuple(ker), M.ctx, d)


@dataclass(frozen=True)
class DiagonalProfile:
    """Exponents a_i of the diagonal invariants p^a_i, nondecreasing.

    a_i = 0 is a unit, 0 < a_i < n a visible torsion invariant, and a_i = n an
    invariant indistinguishable from zero at this precision.
    """

    exponents: tuple[int, ...]
    n: int
    shape: tuple[int, int] = (0, 0)

    @property
    def unit_count(self) -> int:
        return sum(1 for a in self.exponents if a == 0)

    @property
    def zero_count(self) -> int:
        return sum(1 for a in self.exponents if a == self.n)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(a for a in self.exponents if 0 < a < self.n)

    def has_torsion(self) -> bool:
        return bool(self.torsion)

    def cokernel(self) -> tuple[int, ...]:
        """Exponents e of the cyclic factors Z/p^e of (Z/p^n)^cols / rowspan.

        Factors with e = n cannot be told apart from free ones at this precision.
        """
        rows, cols = self.shape
        out = [a for a in self.exponents if a > 0]
        out.extend([self.n] * (cols - len(self.exponents)))
        return tuple(sorted(out))

    def to_json(self) -> dict:
        return {
            "exponents": list(self.exponents),
            "precision": self.n,
            "units": self.unit_count,
            "torsion": list(self.torsion),
            "zero_at_precision": self.zero_count,
            "cokernel": list(self.cokernel()),
        }


def _smith(rows: list[list[int]], ncols: int, p: int, n: int, track: bool = False):
    """Diagonalise by minimal-valuation pivoting, ties to lowest (row, col).

    Returns the pivot exponents (in pivot order) and, with ``track``, a matrix R
    with rowspan(A) = span(p^a_i R_i).
    """
    mod = p ** n
    A = [list(r) for r in rows]
    m, d = len(A), ncols
    R = [[int(i == j) for j in range(d)] for i in range(d)] if track else None
    exps: list[int] = []
    k = 0
    while k < min(m, d):
        best = None
        for i in range(k, m):
            Ai = A[i]
            for j in range(k, d):
                if Ai[j]:
                    v = _val(Ai[j], p, n)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        a, i, j = best
        A[k], A[i] = A[i], A[k]
        if j != k:
            for r in A:
                r[k], r[j] = r[j], r[k]
            if track:
                R[k], R[j] = R[j], R[k]
        u = _unit_part_inverse(A[k][k], a, p, mod)
        A[k] = [x * u % mod for x in A[k]]
        pa = p ** a
        for i2 in range(k + 1, m):
            if A[i2][k]:
                f = A[i2][k] // pa
                A[i2] = [(x - f * y) % mod for x, y in zip(A[i2], A[k])]
        for j2 in range(k + 1, d):
            if A[k][j2]:
                f = A[k][j2] // pa
                A[k][j2] = 0
                if track:
                    R[k] = [(x + f * y) % mod for x, y in zip(R[k], R[j2])]
        exps.append(a)
        k += 1
    return exps, R


def diagonal_invariants(M: MatrixZpn) -> DiagonalProfile:
    m, d = M.shape
    exps, _ = _smith([list(r) for r in M.rows], d, M.ctx.p, M.ctx.n)
    exps = exps + [M.ctx.n] * (min(m, d) - len(exps))
    return DiagonalProfile(tuple(sorted(exps)), M.ctx.n, (m, d))


def saturation(S: Submodule) -> Submodule:
    """Isolator of S at precision n.

    S is diagonalised as the span of p^a_i q_i with the q_i part of a basis of
    (Z/p^n)^dim; the result is the span of the q_i.  At finite precision the
    q_i are only determined up to the deterministic pivoting, see
    :func:`isolator` for the exact version on integer lattices.
    """
    if S.is_zero():
        return S
    exps, R = _smith([list(r) for r in S.rows], S.dim, S.ctx.p, S.ctx.n, track=True)
    return Submodule.span(R[: len(exps)], S.ctx, S.dim)


def isolator(vectors: Sequence[Sequence[int]], ctx: PrimeCtx, dim: int) -> Submodule:
    """(Q_p-span of the integer vectors) intersected with Z_p^dim, mod p^n.

    Works at an inflated precision exceeding every invariant of the lattice
    (Hadamard bound), so nothing is lost to truncation.
    """
    vecs = [[int(x) for x in v] for v in vectors]
    if not vecs:
        return Submodule.zero(dim, ctx)
    p = ctx.p
    bound = 1
    for v in vecs:
        norm = isqrt(sum(x * x for x in v)) + 1
        bound *= norm
    extra = int(log(bound, p)) + 2 if bound > 1 else 1
    big = ctx.n + extra
    mod = p ** big
    exps, R = _smith([[x % mod for x in v] for v in vecs], dim, p, big, track=True)
    keep = [R[i] for i, a in enumerate(exps) if a < big]
    return Submodule.span(keep, ctx, dim)


@dataclass(frozen=True)
class FpSubspace:
    """Subspace of F_p^dim held by its reduced row echelon basis."""

    basis: tuple[tuple[int, ...], ...]
    p: int
    dim: int

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], p: int, dim: int) -> "FpSubspace":
        return cls(tuple(_rref([[x % p for x in v] for v in vectors], dim, p)), p, dim)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        return FpSubspace.span(list(self.basis) + [list(v)], self.p, self.dim).rank == self.rank

    __contains__ = contains

    def __le__(self, other: "FpSubspace") -> bool:
        return all(other.contains(b) for b in self.basis)


def _rref(rows: list[list[int]], d: int, p: int) -> list[tuple[int, ...]]:
    A = [r[:] for r in rows if any(r)]
    lead = 0
    for c in range(d):
        piv = next((i for i in range(lead, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[lead], A[piv] = A[piv], A[lead]
        inv = pow(A[lead][c], -1, p)
        A[lead] = [x * inv % p for x in A[lead]]
        for i in range(len(A)):
            if i != lead and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[lead])]
        lead += 1
    return [tuple(r) for r in A[:lead]]


def mod_p_image(S: Submodule) -> FpSubspace:
    return FpSubspace.span(S.rows, S.ctx.p, S.dim)


def fp_kernel(rows: Sequence[Sequence[int]], p: int, d: int) -> FpSubspace:
    """Right kernel over F_p of the matrix with the given rows."""
    R = _rref([[x % p for x in r] for r in rows], d, p)
    pivots = [next(j for j, x in enumerate(r) if x) for r in R]
    free = [j for j in range(d) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * d
        v[f] = 1
        for r, c in zip(R, pivots):
            v[c] = -r[f] % p
        basis.append(v)
    return FpSubspace.span(basis, p, d)
