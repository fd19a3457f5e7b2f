"""Cech cochains on finite covers of an affine ambient, the explicit H^1
splitting on coprime systems, and cohomology dimensions of finite complexes."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Optional, Sequence

from .groebner import Ideal, unimodular_witness
from .linalg import Matrix, rank
from .polyfield.laurent import LaurentFraction, fraction_eq, normalize
from .polyfield.poly import MultiPoly, RingMismatch


class NotUnimodular(ValueError):
    pass


class CocycleConditionViolated(ValueError):
    def __init__(self, i, j, k):
        super().__init__(f"cocycle condition fails on ({i}, {j}, {k})")
        self.triple = (i, j, k)


class CompositionNotZero(ValueError):
    def __init__(self, k: int):
        super().__init__(f"d^{k + 1} o d^{k} != 0")
        self.k = k


class SplitVerificationError(RuntimeError):
    pass


def _product(fs: Sequence[MultiPoly], idx: Sequence[int]) -> MultiPoly:
    out = fs[0].ring.one
    for i in idx:
        out = out * fs[i]
    return out


def _sort_sign(t: Sequence[int]) -> tuple[int, tuple]:
    """Sign of the sorting permutation (0 if an index repeats) and the sorted tuple."""
    t = list(t)
    if len(set(t)) != len(t):
        return 0, tuple(sorted(t))
    sign = 1
    for a in range(len(t)):
        for b in range(a + 1, len(t)):
            if t[a] > t[b]:
                sign = -sign
    return sign, tuple(sorted(t))


@dataclass
class Cochain:
    """Degree-k cochain: one fraction over A_{f_T} per increasing (k+1)-tuple T.

    Values on other tuples follow by antisymmetry; missing entries are zero.
    """

    ambient: Ideal
    cover: tuple[MultiPoly, ...]
    degree: int
    values: dict[tuple, LaurentFraction] = field(default_factory=dict)
    rank: int = 1

    def __post_init__(self):
        self.cover = tuple(self.cover)
        for t, v in self.values.items():
            if list(t) != sorted(set(t)) or len(t) != self.degree + 1:
                raise ValueError(f"cochain keys must be increasing {self.degree + 1}-tuples, got {t}")
            if v.base != self.base(t):
                raise ValueError(f"value at {t} has denominator base {v.base}, expected {self.base(t)}")
            if v.rank != self.rank:
                raise ValueError(f"value at {t} has rank {v.rank}, expected {self.rank}")

    @property
    def n(self) -> int:
        return len(self.cover)

    def base(self, t: Sequence[int]) -> MultiPoly:
        return _product(self.cover, sorted(t))

    def tuples(self) -> list[tuple]:
        return list(combinations(range(self.n), self.degree + 1))

    def value(self, t: Sequence[int]) -> LaurentFraction:
        sign, st = _sort_sign(t)
        zero = LaurentFraction.zero(self.base(st), self.rank)
        if sign == 0:
            return zero
        v = self.values.get(st, zero)
        return v if sign > 0 else -v

    def is_zero(self) -> bool:
        return all(v.is_zero_in(self.ambient) for v in self.values.values())

    def equals(self, other: "Cochain") -> bool:
        if other.degree != self.degree or other.cover != self.cover:
            return False
        return all(fraction_eq(self.value(t), other.value(t), self.ambient) for t in self.tuples())

    def __sub__(self, other: "Cochain") -> "Cochain":
        vals = {t: self.value(t) - other.value(t) for t in self.tuples()}
        return Cochain(self.ambient, self.cover, self.degree, vals, self.rank)


def boundary(c: Cochain) -> Cochain:
    """(d s)(l_0..l_{k+1}) = sum_j (-1)^j s(l_0..^l_j..l_{k+1}), restricted to U_{l_0..l_{k+1}}."""
    k = c.degree
    out: dict[tuple, LaurentFraction] = {}
    for T in combinations(range(c.n), k + 2):
        acc = LaurentFraction.zero(c.base(T), c.rank)
        for j in range(k + 2):
            face = T[:j] + T[j + 1:]
            term = c.value(face).restrict(c.cover[T[j]])
            acc = acc + term if j % 2 == 0 else acc - term
        out[T] = acc
    return Cochain(c.ambient, c.cover, k + 1, out, c.rank)


def is_cocycle(c: Cochain) -> bool:
    return boundary(c).is_zero()


# ---------------------------------------------------------------------------
# H^1 splitting


@dataclass
class CoprimeSystemCocycle:
    """s_ij over A_{f_i f_j} on a unimodular cover, with s_jk - s_ik + s_ij = 0.

    ``s`` is given on pairs i < j; the rest follows by antisymmetry.
    """

    ambient: Ideal
    cover: tuple[MultiPoly, ...]
    s: dict[tuple[int, int], LaurentFraction]
    rank: int = 1
    witness: Optional[tuple[MultiPoly, ...]] = None

    def __post_init__(self):
        self.cover = tuple(self.cover)
        n = len(self.cover)
        fixed = {}
        for (i, j), v in self.s.items():
            if i == j:
                if not v.is_zero_in(self.ambient):
                    raise CocycleConditionViolated(i, i, i)
                continue
            a, b = min(i, j), max(i, j)
            val = v if i < j else -v
            if val.base != self.cover[a] * self.cover[b]:
                raise ValueError(f"s at ({i}, {j}) must have denominator base f_{a} f_{b}")
            if val.rank != self.rank:
                raise ValueError(f"s at ({i}, {j}) has rank {val.rank}, expected {self.rank}")
            if (a, b) in fixed and not fraction_eq(fixed[(a, b)], val, self.ambient):
                raise CocycleConditionViolated(a, b, a)
            fixed[(a, b)] = val
        self.s = fixed
        self.cochain = Cochain(self.ambient, self.cover, 1, fixed, self.rank)
        for i, j, k in combinations(range(n), 3):
            T = (i, j, k)
            base = self.cochain.base(T)
            total = (
                self.cochain.value((j, k)).restrict(self.cover[i])
                - self.cochain.value((i, k)).restrict(self.cover[j])
                + self.cochain.value((i, j)).restrict(self.cover[k])
            )
            assert total.base == base
            if not total.is_zero_in(self.ambient):
                raise CocycleConditionViolated(i, j, k)

    def value(self, i: int, j: int) -> LaurentFraction:
        return self.cochain.value((i, j))


@dataclass
class SplitResult:
    u: list[LaurentFraction]
    exponent: int
    witness: list[MultiPoly]
    transcript: list[tuple[str, bool]]

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.transcript)


def split_h1(z: CoprimeSystemCocycle, max_extra: int = 20) -> SplitResult:
    """Find u_i over A_{f_i} with u_j - u_i = s_ij.

    Writing s_ij = m_ij / (F_i F_j) with F_i = f_i^K and picking r with
    sum r_k F_k = 1, set u_i = -sum_k r_k m_ik / F_i. This needs the numerator
    identity F_i m_jk - F_j m_ik + F_k m_ij = 0 in A itself; K is raised until
    it holds (it always does eventually, since it holds after localizing).
    """
    I, fs = z.ambient, z.cover
    n = len(fs)
    K = max([1] + [v.exp for v in z.s.values()])

    def numerators(K: int) -> dict[tuple[int, int], tuple[MultiPoly, ...]]:
        out = {}
        for i in range(n):
            for j in range(n):
                out[(i, j)] = z.value(i, j).with_exp(K).num
        return out

    for _ in range(max_extra + 1):
        F = [f**K for f in fs]
        m = numerators(K)
        exact = True
        for i, j, k in combinations(range(n), 3):
            for c in range(z.rank):
                expr = F[i] * m[(j, k)][c] - F[j] * m[(i, k)][c] + F[k] * m[(i, j)][c]
                if not I.contains(expr):
                    exact = False
                    break
            if not exact:
                break
        if exact:
            break
        K += 1
    else:
        raise SplitVerificationError("numerator cocycle identity not reached within the exponent bound")

    if K == 1 and z.witness is not None:
        r = list(z.witness)
        total = sum((ri * fi for ri, fi in zip(r, fs)), I.ring.zero)
        if len(r) != n or not I.contains(total - I.ring.one):
            raise NotUnimodular("supplied witness does not satisfy sum r_i f_i = 1")
    else:
        r = unimodular_witness(F, I)
        if r is None:
            raise NotUnimodular(f"{[str(f) for f in fs]} does not generate the unit ideal")

    u = []
    for i in range(n):
        num = []
        for c in range(z.rank):
            acc = I.ring.zero
            for k in range(n):
                acc = acc - r[k] * m[(i, k)][c]
            num.append(I.normal_form(acc))
        u.append(normalize(LaurentFraction(tuple(num), fs[i], K), I))

    transcript = []
    for i, j in combinations(range(n), 2):
        diff = u[j].restrict(fs[i]) - u[i].restrict(fs[j])
        ok = fraction_eq(diff, z.value(i, j), I)
        transcript.append((f"u_{j} - u_{i} = s_{i}{j}", ok))
    result = SplitResult(u, K, r, transcript)
    if not result.ok:
        raise SplitVerificationError("splitting failed its own verification")
    return result


def zero_cochain(u: Sequence[LaurentFraction], ambient: Ideal, cover: Sequence[MultiPoly]) -> Cochain:
    rank = u[0].rank if u else 1
    return Cochain(ambient, tuple(cover), 0, {(i,): v for i, v in enumerate(u)}, rank)


# ---------------------------------------------------------------------------
# finite complexes


def cohomology_dims(matrices: Sequence[Matrix], spaces: Optional[Sequence[int]] = None) -> list[int]:
    """dim H^k = dim C^k - rank d^k - rank d^{k-1} for C^0 -> C^1 -> ... .

    ``matrices[k]`` is d^k: C^k -> C^{k+1} (rows index C^{k+1}). ``spaces``
    gives the dimensions of C^0..C^N and is required when there are no maps.
    """
    if spaces is None:
        if not matrices:
            raise ValueError("spaces required for a complex without maps")
        spaces = [matrices[0].ncols] + [d.nrows for d in matrices]
    spaces = list(spaces)
    if len(spaces) != len(matrices) + 1:
        raise ValueError("need one more space than maps")
    for k, d in enumerate(matrices):
        if d.ncols != spaces[k] or d.nrows != spaces[k + 1]:
            raise ValueError(f"d^{k} has shape {d.nrows}x{d.ncols}, expected {spaces[k + 1]}x{spaces[k]}")
    for k in range(len(matrices) - 1):
        if not (matrices[k + 1] @ matrices[k]).is_zero():
            raise CompositionNotZero(k)
    ranks = [rank(d) for d in matrices] + [0]
    return [spaces[k] - ranks[k] - (ranks[k - 1] if k > 0 else 0) for k in range(len(spaces))]
