"""Exact arithmetic in Z/p^n and its group of 1-units.

Values are immutable.  Every value carries its :class:`PrimeCtx`; combining
values from different contexts raises :class:`ContextMismatch` instead of
coercing.
"""

from __future__ import annotations

from dataclasses import dataclass


class ContextMismatch(ValueError):
    pass


class NotAUnit(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def vp(k: int, p: int, cap: int) -> int:
    """Largest v <= cap with p^v dividing k (cap when k == 0 mod p^cap)."""
    v = 0
    while v < cap and k % p == 0:
        k //= p
        v += 1
    return v


@dataclass(frozen=True)
class PrimeCtx:
    p: int
    n: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p must be a prime, got {self.p!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"precision must be >= 1, got {self.n!r}")

    @property
    def modulus(self) -> int:
        return self.p ** self.n

    def at(self, n: int) -> "PrimeCtx":
        return PrimeCtx(self.p, n)

    def __call__(self, k: int) -> "TruncatedInt":
        return reduce(k, self)


def reduce(k: int, ctx: PrimeCtx) -> "TruncatedInt":
    return TruncatedInt(k % ctx.modulus, ctx)


@dataclass(frozen=True)
class TruncatedInt:
    value: int
    ctx: PrimeCtx

    def __post_init__(self):
        m = self.ctx.modulus
        if not 0 <= self.value < m:
            object.__setattr__(self, "value", self.value % m)

    def _coerce(self, other) -> int:
        if isinstance(other, TruncatedInt):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedInt(self.value + o, self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedInt(self.value - o, self.ctx)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedInt(o - self.value, self.ctx)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedInt(self.value * o, self.ctx)

    __rmul__ = __mul__

    def __neg__(self):
        return TruncatedInt(-self.value, self.ctx)

    def __pow__(self, e: int):
        # negative e needs a unit; pow raises ValueError otherwise
        return TruncatedInt(pow(self.value, e, self.ctx.modulus), self.ctx)

    def __eq__(self, other):
        if isinstance(other, TruncatedInt):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
            return self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.ctx.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.ctx))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.ctx.p}^{self.ctx.n})"

    def is_unit(self) -> bool:
        return self.value % self.ctx.p != 0

    def truncate(self, n: int) -> "TruncatedInt":
        """Image under Z/p^N -> Z/p^n for n <= N."""
        if n > self.ctx.n:
            raise ValueError("cannot raise precision")
        return reduce(self.value, self.ctx.at(n))


def valuation(a: TruncatedInt) -> int:
    return vp(a.value, a.ctx.p, a.ctx.n)


def is_one_unit(k: int, p: int, n: int) -> bool:
    """Whether k lies in 1+pZ (1+4Z for p=2) as far as precision n can tell."""
    if k % p != 1 % p:
        return False
    if p == 2 and n >= 2 and k % 4 != 1:
        return False
    return True


class TruncatedUnit(TruncatedInt):
    """A residue in 1+pZ/p^n (1+4Z/2^n when p = 2)."""

    def __post_init__(self):
        super().__post_init__()
        if not is_one_unit(self.value, self.ctx.p, self.ctx.n):
            lead = "1+4Z" if self.ctx.p == 2 else f"1+{self.ctx.p}Z"
            raise NotAUnit(f"{self.value} is not in {lead} mod {self.ctx.modulus}")

    def __mul__(self, other):
        if isinstance(other, TruncatedUnit):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
            return TruncatedUnit(self.value * other.value, self.ctx)
        return super().__mul__(other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return TruncatedUnit(pow(self.value, e, self.ctx.modulus), self.ctx)

    def truncate(self, n: int) -> "TruncatedUnit":
        if n > self.ctx.n:
            raise ValueError("cannot raise precision")
        return TruncatedUnit(self.value, self.ctx.at(n))


def unit_inverse(u: TruncatedUnit) -> TruncatedUnit:
    return TruncatedUnit(pow(u.value, -1, u.ctx.modulus), u.ctx)


def one_units(p: int, n: int) -> list[int]:
    """All residues mod p^n lying in 1+pZ (1+4Z for p = 2), ascending."""
    step = 4 if (p == 2 and n >= 2) else p
    return list(range(1, p ** n, step))
