"""Zariski covers: containment of standard opens and closed sets, patching of
locally given ideals, unit decomposition on overlaps in the affine line, and
pointed cocycle trivialization."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Mapping, Optional, Sequence

from .fpalg import FPAlgebra
from .groebner import Ideal, ideal_contains, is_unimodular, radical_membership
from .polyfield.field import Field, Scalar
from .polyfield.laurent import LaurentFraction
from .polyfield.poly import MultiPoly, PolyRing, RingMismatch


class CompatibilityFailure(ValueError):
    def __init__(self, i: int, j: int, generator):
        super().__init__(f"generator {generator} of piece {i} is not in the ideal of piece {j} on the overlap")
        self.i, self.j, self.generator = i, j, generator


class NotACover(ValueError):
    pass


class UnsupportedRoot(ValueError):
    def __init__(self, root):
        super().__init__(f"linear factor X - {root} is not invertible on the overlap")
        self.root = root


class CocycleLawViolation(ValueError):
    def __init__(self, i, j, k):
        super().__init__(f"cocycle law fails at ({i}, {j}, {k})")
        self.triple = (i, j, k)


class PatchVerificationError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# opens and closed sets


@dataclass(frozen=True)
class StandardOpen:
    """D(f_1, ..., f_n): points where some f_i is invertible."""

    ambient: FPAlgebra
    fs: tuple[MultiPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "fs", tuple(self.fs))
        if not self.fs:
            raise ValueError("a standard open needs at least one function")
        for f in self.fs:
            if f.ring != self.ambient.ring:
                raise RingMismatch(f"{f} is not a function on the ambient")


@dataclass(frozen=True)
class ClosedSet:
    """V(f_1, ..., f_n): points where every f_i vanishes."""

    ambient: FPAlgebra
    fs: tuple[MultiPoly, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "fs", tuple(self.fs))
        for f in self.fs:
            if f.ring != self.ambient.ring:
                raise RingMismatch(f"{f} is not a function on the ambient")


def open_contained(U: StandardOpen, V: StandardOpen) -> bool:
    """D(f_1..f_m) in D(g_1..g_n) iff each f_i lies in the radical of I + (g)."""
    if U.ambient != V.ambient:
        raise RingMismatch("opens in different ambients")
    J = U.ambient.ideal + V.fs
    return all(radical_membership(f, J) for f in U.fs)


def closed_contained(V: ClosedSet, W: ClosedSet) -> bool:
    """V(f) in V(g) iff (g) is contained in (f) in the ambient algebra."""
    if V.ambient != W.ambient:
        raise RingMismatch("closed sets in different ambients")
    I = V.ambient.ideal
    return ideal_contains(I + V.fs, I + W.fs)


# ---------------------------------------------------------------------------
# ideal patching


@dataclass
class LocalIdealFamily:
    """Ideals I_i of A_{f_i} for a unimodular cover (f_1..f_n) of A."""

    ambient: FPAlgebra
    cover: tuple[MultiPoly, ...]
    locals: tuple[tuple[LaurentFraction, ...], ...]

    def __post_init__(self):
        self.cover = tuple(self.cover)
        self.locals = tuple(tuple(gs) for gs in self.locals)
        if len(self.cover) != len(self.locals):
            raise ValueError("one generator list per cover element expected")
        for f, gs in zip(self.cover, self.locals):
            for g in gs:
                if g.base != f or g.rank != 1:
                    raise ValueError(f"local generator {g} does not live in A_{{{f}}}")
        if not is_unimodular(self.cover, self.ambient.ideal):
            raise NotACover(f"{list(map(str, self.cover))} does not generate the unit ideal")


def localized_member(g: MultiPoly, gens: Sequence[MultiPoly], f: MultiPoly, ambient: Ideal) -> bool:
    """g/1 lies in (gens) A_f, i.e. g is in (I + (gens)) : f^inf."""
    return (ambient + gens).saturate(f).contains(g)


@dataclass
class PatchResult:
    ideal: Ideal
    exponents: dict[tuple[int, int, int], int]
    transcript: list[tuple[str, bool]] = field(default_factory=list)


def patch_ideals(fam: LocalIdealFamily, bound: int = 20) -> PatchResult:
    """Glue local ideals into one finitely generated ideal of A.

    Denominators are cleared (they are units locally). For every generator
    g_ik and every other piece j the least l with (f_i f_j)^l g_ik in
    I + (g_j*) is found; f_i^L g_ik (L the largest such l) then lies in I_j
    after localizing at f_j, so these elements generate the patched ideal.
    """
    I_A = fam.ambient.ideal
    fs = fam.cover
    nums = [[g.num[0] for g in gs] for gs in fam.locals]
    n = len(fs)

    for i, j in product(range(n), repeat=2):
        if i == j:
            continue
        fij = fs[i] * fs[j]
        for k, g in enumerate(nums[i]):
            if not localized_member(g, nums[j], fij, I_A):
                raise CompatibilityFailure(i, j, fam.locals[i][k])

    exponents: dict[tuple[int, int, int], int] = {}
    patched: list[MultiPoly] = []
    for i in range(n):
        for k, g in enumerate(nums[i]):
            L = 0
            for j in range(n):
                if j == i:
                    continue
                target = I_A + nums[j]
                fij = fs[i] * fs[j]
                l, power = 0, g
                while not target.contains(power):
                    l += 1
                    power = power * fij
                    if l > bound and not localized_member(g, nums[j], fij, I_A):
                        raise CompatibilityFailure(i, j, fam.locals[i][k])
                exponents[(i, k, j)] = l
                L = max(L, l)
            h = I_A.normal_form(fs[i] ** L * g)
            if h not in patched:
                patched.append(h)
    result = Ideal(I_A.ring, patched)
    transcript = verify_patch(fam, result)
    if not all(ok for _, ok in transcript):
        raise PatchVerificationError("patched ideal does not localize to the inputs")
    return PatchResult(result, exponents, transcript)


def verify_patch(fam: LocalIdealFamily, I: Ideal) -> list[tuple[str, bool]]:
    """A_{f_i} I = I_i for every i, as two localized inclusions."""
    I_A = fam.ambient.ideal
    out = []
    for i, (f, gs) in enumerate(zip(fam.cover, fam.locals)):
        local = [g.num[0] for g in gs]
        down = all(localized_member(h, local, f, I_A) for h in I.gens)
        up = all(localized_member(g, list(I.gens), f, I_A) for g in local)
        out.append((f"piece {i}: I localizes into I_{i}", down))
        out.append((f"piece {i}: I_{i} lies in localized I", up))
    return out


# ---------------------------------------------------------------------------
# units on opens of the affine line


@dataclass(frozen=True)
class FactoredUnit:
    """alpha * prod (X - a)^e, a unit on any open avoiding its roots."""

    field: Field
    unit: Scalar
    exps: tuple[tuple[Scalar, int], ...] = ()

    def __post_init__(self):
        if self.unit == 0:
            raise ValueError("unit part must be nonzero")
        merged: dict = {}
        for a, e in self.exps:
            a = self.field(a)
            merged[a] = merged.get(a, 0) + e
        object.__setattr__(self, "exps", tuple(sorted((a, e) for a, e in merged.items() if e)))

    @classmethod
    def constant(cls, F: Field, c) -> "FactoredUnit":
        return cls(F, F(c))

    @property
    def support(self) -> frozenset:
        return frozenset(a for a, _ in self.exps)

    def exponent(self, a) -> int:
        return dict(self.exps).get(a, 0)

    def __mul__(self, other: "FactoredUnit") -> "FactoredUnit":
        return FactoredUnit(self.field, self.field.mul(self.unit, other.unit), self.exps + other.exps)

    def inverse(self) -> "FactoredUnit":
        return FactoredUnit(self.field, self.field.inv(self.unit), tuple((a, -e) for a, e in self.exps))

    def __truediv__(self, other: "FactoredUnit") -> "FactoredUnit":
        return self * other.inverse()

    def as_fraction(self, ring: PolyRing) -> tuple[MultiPoly, MultiPoly]:
        """(numerator, denominator) polynomials in the single variable of ``ring``."""
        X = ring.gen(0)
        num, den = ring.const(self.unit), ring.one
        for a, e in self.exps:
            lin = X - ring.const(a)
            if e > 0:
                num = num * lin**e
            else:
                den = den * lin ** (-e)
        return num, den

    def __str__(self):
        F = self.field
        parts = [F.format(self.unit)] if self.unit != 1 or not self.exps else []
        for a, e in self.exps:
            lin = "X" if a == 0 else f"(X - {F.format(a)})"
            parts.append(lin if e == 1 else f"{lin}^{e}")
        return "*".join(parts)


def same_rational_function(f: FactoredUnit, g: FactoredUnit, ring: PolyRing) -> bool:
    fn, fd = f.as_fraction(ring)
    gn, gd = g.as_fraction(ring)
    return fn * gd == gn * fd


def decompose_unit_on_intersection(
    shared_roots: Sequence,
    u_only_roots: Sequence,
    v_only_roots: Sequence,
    f: FactoredUnit,
) -> tuple[FactoredUnit, FactoredUnit]:
    """Split a unit f on U cap V into g (unit on U) times h (unit on V).

    U misses the shared and U-only roots, V misses the shared and V-only
    roots. g keeps the constant and every shared or U-only factor; h keeps the
    V-only factors.
    """
    F = f.field
    shared = {F(a) for a in shared_roots}
    u_only = {F(a) for a in u_only_roots}
    v_only = {F(a) for a in v_only_roots}
    if len(shared) + len(u_only) + len(v_only) != len(shared | u_only | v_only):
        raise ValueError("root lists must be pairwise disjoint")
    for a, e in f.exps:
        if a not in shared and a not in u_only and a not in v_only:
            raise UnsupportedRoot(a)
    g = FactoredUnit(F, f.unit, tuple((a, e) for a, e in f.exps if a in shared or a in u_only))
    h = FactoredUnit(F, F.one, tuple((a, e) for a, e in f.exps if a in v_only))
    return g, h


@dataclass
class MergeResult:
    """Gauges t_i with the global section equal to t_i * s_i on U_i."""

    gauges: list[FactoredUnit]
    steps: list[str]
    transcript: list[tuple[str, bool]]


def merge_sections(
    complements: Sequence[Sequence],
    transitions: Mapping[tuple[int, int], FactoredUnit],
    field_: Field,
) -> MergeResult:
    """Glue local sections of a G_m-torsor on the affine line.

    Piece i is the line minus ``complements[i]``; ``transitions[(i, j)]`` is
    the unit f_ij with f_ij s_i = s_j on the overlap (given for i < j; the
    reverse direction is the inverse). Pieces are merged pairwise until one
    remains; the returned gauges satisfy t_i = t_j f_ij on every overlap.
    """
    F = field_
    n = len(complements)
    if n == 0:
        raise ValueError("at least one piece required")
    holes = [frozenset(F(a) for a in c) for c in complements]
    if frozenset.intersection(*holes):
        missed = ", ".join(F.format(a) for a in sorted(frozenset.intersection(*holes)))
        raise NotACover(f"points {missed} are not covered")

    def trans(i: int, j: int) -> FactoredUnit:
        if (i, j) in transitions:
            return transitions[(i, j)]
        if (j, i) in transitions:
            return transitions[(j, i)].inverse()
        raise KeyError(f"missing transition between pieces {i} and {j}")

    gauges = [FactoredUnit.constant(F, 1) for _ in range(n)]
    # each live piece: (hole set, member indices, representative index)
    pieces = [(holes[i], [i]) for i in range(n)]
    steps = []
    while len(pieces) > 1:
        (SP, P), (SQ, Q) = pieces[0], pieces[1]
        p0, q0 = P[0], Q[0]
        # s_Q = f s_P with s_P = t_p0 s_p0 and s_Q = t_q0 s_q0
        f = gauges[q0] * trans(p0, q0) / gauges[p0]
        g, h = decompose_unit_on_intersection(SP & SQ, SP - SQ, SQ - SP, f)
        for i in P:
            gauges[i] = g * gauges[i]
        for j in Q:
            gauges[j] = h.inverse() * gauges[j]
        steps.append(f"merge {P} + {Q}: f = {f}, g = {g}, h = {h}")
        pieces = [(SP & SQ, P + Q)] + pieces[2:]

    ring = PolyRing(F, ("X",))
    transcript = []
    for i in range(n):
        ok = gauges[i].support <= holes[i]
        transcript.append((f"gauge {i} is a unit on piece {i}", ok))
    for i, j in combinations(range(n), 2):
        ok = same_rational_function(gauges[i], gauges[j] * trans(i, j), ring)
        transcript.append((f"sections agree on overlap {i},{j}", ok))
    return MergeResult(gauges, steps, transcript)


# ---------------------------------------------------------------------------
# pointed cocycles


class PointedCocycle:
    """c: L x L -> k^r with c_ij + c_jk = c_ik, on an inhabited index set."""

    def __init__(
        self, field_: Field, indices: Sequence, values: Mapping[tuple, Sequence], base=None, rank: Optional[int] = None
    ):
        self.field = field_
        self.indices = list(indices)
        if not self.indices:
            raise ValueError("index set must be inhabited")
        self.base = self.indices[0] if base is None else base
        if self.base not in self.indices:
            raise ValueError(f"base index {self.base} not in the index set")
        if rank is None:
            rank = len(next(iter(values.values()))) if values else 1
        if any(len(v) != rank for v in values.values()):
            raise ValueError(f"cocycle values must all have rank {rank}")
        F = field_
        zero = tuple(F.zero for _ in range(rank))
        c: dict = {}
        for i in self.indices:
            for j in self.indices:
                if (i, j) in values:
                    c[(i, j)] = tuple(F(x) for x in values[(i, j)])
                elif (j, i) in values:
                    c[(i, j)] = tuple(F.neg(F(x)) for x in values[(j, i)])
                elif i == j:
                    c[(i, j)] = zero
                else:
                    raise ValueError(f"missing cocycle value at ({i}, {j})")
        self.rank = rank
        self.values = c
        for i, j, k in product(self.indices, repeat=3):
            lhs = tuple(F.add(a, b) for a, b in zip(c[(i, j)], c[(j, k)]))
            if lhs != c[(i, k)]:
                raise CocycleLawViolation(i, j, k)


def trivialize_pointed_cocycle(c: PointedCocycle) -> dict:
    """u_i = -c_{base, i}, so that u_i - u_j = c_ij."""
    F = c.field
    return {i: tuple(F.neg(x) for x in c.values[(c.base, i)]) for i in c.indices}
