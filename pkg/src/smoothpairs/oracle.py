"""Brute-force cross-checks on tiny instances.

Nothing here uses Fox calculus or the Howell form: cocycles are found by
enumerating generator values and propagating c(g x) = c(g) + theta(g) c(x)
through an explicit multiplication table, and row modules by closing a set
under addition.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Callable, Hashable, Sequence

from .padics import PrimeCtx, is_prime

LIMIT = 10**5


class TooLarge(ValueError):
    pass


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class TinyGroupModel:
    """Finite p-group as elements 0..N-1 (0 the identity) and a table."""

    p: int
    table: tuple[tuple[int, ...], ...]
    generators: tuple[int, ...]
    labels: tuple = ()

    def __post_init__(self):
        order = len(self.table)
        k, m = 0, order
        while m % self.p == 0:
            m //= self.p
            k += 1
        if m != 1 or k > 4:
            raise ModelError(f"order {order} is not p^k with k <= 4")
        rng = range(order)
        T = self.table
        for a in rng:
            if T[0][a] != a or T[a][0] != a:
                raise ModelError("element 0 is not the identity")
            if 0 not in T[a]:
                raise ModelError(f"element {a} has no inverse")
        for a in rng:
            for b in rng:
                ab = T[a][b]
                for c in rng:
                    if T[ab][c] != T[a][T[b][c]]:
                        raise ModelError("multiplication is not associative")

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @classmethod
    def from_function(cls, p: int, mul: Callable, identity: Hashable, gens: Sequence[Hashable]) -> "TinyGroupModel":
        """Close the generators under mul and tabulate."""
        if not is_prime(p):
            raise ModelError("p must be prime")
        elems = [identity]
        index = {identity: 0}
        queue = deque([identity])
        while queue:
            a = queue.popleft()
            for g in gens:
                b = mul(a, g)
                if b not in index:
                    if len(elems) >= p ** 4:
                        raise ModelError("group is larger than p^4")
                    index[b] = len(elems)
                    elems.append(b)
                    queue.append(b)
        table = tuple(tuple(index[mul(a, b)] for b in elems) for a in elems)
        return cls(p, table, tuple(index[g] for g in gens), tuple(elems))


def cyclic(p: int, k: int = 1) -> TinyGroupModel:
    m = p ** k
    return TinyGroupModel.from_function(p, lambda a, b: (a + b) % m, 0, [1])


def elementary_abelian(p: int, r: int = 2) -> TinyGroupModel:
    gens = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    return TinyGroupModel.from_function(
        p, lambda a, b: tuple((x + y) % p for x, y in zip(a, b)), tuple([0] * r), gens
    )


def heisenberg_mod_p(p: int) -> TinyGroupModel:
    """Upper unitriangular 3x3 over F_p: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')."""

    def mul(u, v):
        return ((u[0] + v[0]) % p, (u[1] + v[1]) % p, (u[2] + v[2] + u[0] * v[1]) % p)

    return TinyGroupModel.from_function(p, mul, (0, 0, 0), [(1, 0, 0), (0, 1, 0)])


def trivial(p: int) -> TinyGroupModel:
    return TinyGroupModel(p, ((0,),), ())


def _check_size(count: int):
    if count > LIMIT:
        raise TooLarge(f"{count} candidates exceed the limit {LIMIT}")


def model_theta(model: TinyGroupModel, theta: Sequence[int], ctx: PrimeCtx) -> list[int]:
    """theta on every element, propagated from the generators; a homomorphism or error."""
    mod = ctx.modulus
    vals: list[int | None] = [None] * model.order
    vals[0] = 1
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for g, t in zip(model.generators, theta):
            b = model.mul(a, g)
            v = vals[a] * t % mod
            if vals[b] is None:
                vals[b] = v
                queue.append(b)
            elif vals[b] != v:
                raise ModelError("theta does not factor through the model")
    return vals  # type: ignore[return-value]


def brute_cocycles(model: TinyGroupModel, theta: Sequence[int], n: int) -> list[tuple[int, ...]]:
    """Generator values of all 1-cocycles model -> Z/p^n(1)."""
    ctx = PrimeCtx(model.p, n)
    mod = ctx.modulus
    d = len(model.generators)
    _check_size(mod ** d)
    th = model_theta(model, theta, ctx)
    N = model.order
    out = []
    for v in product(range(mod), repeat=d):
        c: list[int | None] = [None] * N
        c[0] = 0
        queue = deque([0])
        ok = True
        while queue and ok:
            a = queue.popleft()
            for g, vg in zip(model.generators, v):
                b = model.mul(a, g)
                val = (c[a] + th[a] * vg) % mod
                if c[b] is None:
                    c[b] = val
                    queue.append(b)
                elif c[b] != val:
                    ok = False
                    break
        if not ok:
            continue
        if all(c[model.mul(a, b)] == (c[a] + th[a] * c[b]) % mod for a in range(N) for b in range(N)):
            out.append(tuple(v))
    return out


def presentation_cocycles(pair, n: int) -> list[tuple[int, ...]]:
    """Generator values killing every relator, walking each relator letter by letter."""
    pres = pair.presentation
    mod = pres.p ** n
    theta = [t % mod for t in pair.orientation.values]
    theta_inv = [pow(t, -1, mod) for t in theta]
    d = pres.d
    _check_size(mod ** d)
    letters = [[(g, 1 if e > 0 else -1) for g, e in r.syllables for _ in range(abs(e))] for r in pres.relators]
    if sum(len(w) for w in letters) > 10**4:
        raise TooLarge("relators too long for letter-by-letter evaluation")
    out = []
    for v in product(range(mod), repeat=d):
        good = True
        for word in letters:
            c, t = 0, 1
            for g, s in word:
                if s > 0:
                    c = (c + t * v[g]) % mod
                    t = t * theta[g] % mod
                else:
                    t = t * theta_inv[g] % mod
                    c = (c - t * v[g]) % mod
            if c:
                good = False
                break
        if good:
            out.append(tuple(v))
    return out


def brute_span(rows: Sequence[Sequence[int]], ctx: PrimeCtx, dim: int | None = None) -> set[tuple[int, ...]]:
    """All elements of the row module, by closing under addition."""
    mod = ctx.modulus
    if dim is None:
        if not rows:
            raise ValueError("dim required without rows")
        dim = len(rows[0])
    _check_size(mod ** dim)
    gens = [tuple(int(x) % mod for x in r) for r in rows]
    zero = tuple([0] * dim)
    seen = {zero}
    queue = deque([zero])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = tuple((x + y) % mod for x, y in zip(a, g))
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return seen


def brute_kernel(rows: Sequence[Sequence[int]], ctx: PrimeCtx, dim: int) -> set[tuple[int, ...]]:
    mod = ctx.modulus
    _check_size(mod ** dim)
    return {
        v for v in product(range(mod), repeat=dim)
        if all(sum(a * b for a, b in zip(r, v)) % mod == 0 for r in rows)
    }


def minimal_isolated_oversets(S: set[tuple[int, ...]], ctx: PrimeCtx, dim: int) -> list[set[tuple[int, ...]]]:
    """All smallest direct summands of (Z/p^n)^dim containing S (dim <= 2).

    For dim <= 2 the direct summands are 0, lines spanned by a vector that is
    nonzero mod p, and the whole module.  The answer need not be unique:
    span{(3,3)} in (Z/9)^2 lies in the lines of (1,1), (1,4) and (1,7).
    """
    if dim > 2:
        raise TooLarge("implemented for dim <= 2")
    mod = ctx.modulus
    _check_size(mod ** dim)
    vectors = list(product(range(mod), repeat=dim))
    spans = [frozenset(brute_span([], ctx, dim)), frozenset(vectors)]
    spans += {frozenset(brute_span([v], ctx, dim)) for v in vectors if any(x % ctx.p for x in v)}
    cands = [T for T in spans if S <= T]
    best = min(len(T) for T in cands)
    return sorted((set(T) for T in set(cands) if len(T) == best), key=sorted)
