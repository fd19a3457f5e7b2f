"""Fractions ``m / f^k`` with vector numerators, living in a localization A_f
of a quotient A = k[x]/I.

Equality is decided through the saturation (I : f^inf): two fractions agree in
A_f exactly when their cross-multiplied difference is killed by a power of f.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poly import MultiPoly, PolyRing, RingMismatch


@dataclass(frozen=True)
class LaurentFraction:
    num: tuple[MultiPoly, ...]
    base: MultiPoly
    exp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(self.num))
        if not self.num:
            raise ValueError("numerator vector must have length >= 1")
        if self.base.is_zero():
            raise ValueError("denominator base must be nonzero")
        if self.exp < 0:
            raise ValueError("denominator exponent must be non-negative")
        ring = self.base.ring
        if any(m.ring != ring for m in self.num):
            raise RingMismatch("numerator and denominator live in different rings")

    @classmethod
    def scalar(cls, m: MultiPoly, base: MultiPoly, exp: int = 0) -> "LaurentFraction":
        return cls((m,), base, exp)

    @classmethod
    def zero(cls, base: MultiPoly, rank: int = 1) -> "LaurentFraction":
        return cls(tuple(base.ring.zero for _ in range(rank)), base, 0)

    @property
    def ring(self) -> PolyRing:
        return self.base.ring

    @property
    def rank(self) -> int:
        return len(self.num)

    def _compatible(self, other: "LaurentFraction"):
        if other.base != self.base or other.rank != self.rank:
            raise RingMismatch("fractions over different localizations or ranks")

    def with_exp(self, k: int) -> "LaurentFraction":
        """Same element written over f^k (k >= exp)."""
        if k < self.exp:
            raise ValueError("cannot lower the exponent by rewriting")
        if k == self.exp:
            return self
        mult = self.base ** (k - self.exp)
        return LaurentFraction(tuple(m * mult for m in self.num), self.base, k)

    def __add__(self, other: "LaurentFraction") -> "LaurentFraction":
        self._compatible(other)
        k = max(self.exp, other.exp)
        a, b = self.with_exp(k), other.with_exp(k)
        return LaurentFraction(tuple(x + y for x, y in zip(a.num, b.num)), self.base, k)

    def __neg__(self) -> "LaurentFraction":
        return LaurentFraction(tuple(-m for m in self.num), self.base, self.exp)

    def __sub__(self, other: "LaurentFraction") -> "LaurentFraction":
        return self + (-other)

    def scale(self, c: MultiPoly) -> "LaurentFraction":
        return LaurentFraction(tuple(c * m for m in self.num), self.base, self.exp)

    def restrict(self, extra: MultiPoly) -> "LaurentFraction":
        """Image in A_{f g}: m / f^k  ->  m g^k / (f g)^k."""
        mult = extra ** self.exp
        return LaurentFraction(tuple(m * mult for m in self.num), self.base * extra, self.exp)

    def is_zero_in(self, ambient) -> bool:
        return fraction_eq(self, LaurentFraction.zero(self.base, self.rank), ambient)

    def __str__(self):
        nums = ", ".join(str(m) for m in self.num)
        if self.exp == 0:
            return f"({nums})" if self.rank > 1 else nums
        if self.rank > 1 or len(self.num[0]) > 1:
            nums = f"({nums})"
        den = f"({self.base})" if len(self.base) > 1 else str(self.base)
        return f"{nums} / {den}" + (f"^{self.exp}" if self.exp > 1 else "")


def fraction_eq(a: LaurentFraction, b: LaurentFraction, ambient) -> bool:
    """Equality in (k[x]/I)_f; ``ambient`` is the ideal I."""
    a._compatible(b)
    if ambient.ring != a.ring:
        raise RingMismatch("fraction and ambient ideal live in different rings")
    k = max(a.exp, b.exp)
    a, b = a.with_exp(k), b.with_exp(k)
    diffs = [x - y for x, y in zip(a.num, b.num)]
    if all(d.is_zero() for d in diffs):
        return True
    sat = ambient.saturate(a.base)
    return all(sat.contains(d) for d in diffs)


def normalize(fr: LaurentFraction, ambient) -> LaurentFraction:
    """Canonical representative: minimal exponent, numerators reduced modulo
    (I : f^inf)."""
    from ..groebner import Ideal, lift

    sat: Ideal = ambient.saturate(fr.base)
    num = [sat.normal_form(m) for m in fr.num]
    k = fr.exp
    if all(m.is_zero() for m in num):
        return LaurentFraction(tuple(num), fr.base, 0)
    gens = [fr.base] + list(sat.gens)
    while k > 0:
        lifted = [lift(m, gens) for m in num]
        if any(c is None for c in lifted):
            break
        num = [sat.normal_form(c[0]) for c in lifted]
        k -= 1
    return LaurentFraction(tuple(num), fr.base, k)


def fractions_from(nums: Sequence[MultiPoly], base: MultiPoly, exp: int) -> LaurentFraction:
    return LaurentFraction(tuple(nums), base, exp)
