"""Projective space through its standard charts.

Serre twists on P^1 are glued by Laurent units: with the sign convention used
here O(-1) is glued by multiplication with X and O(1) by 1/X, so O(d) has glue
unit X^(-d). Cohomology of O(d) on P^n is computed from the Cech complex of
the standard cover, one finite complex per multidegree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterator, Sequence

from .cech import cohomology_dims
from .linalg import Matrix, rank
from .polyfield.field import QQ, Field, Scalar
from .polyfield.poly import MultiPoly, PolyRing

MAX_N = 4
MAX_ABS_D = 12


class NotAUnit(ValueError):
    pass


class CapExceeded(ValueError):
    pass


class WindowInstability(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class ProjPoint:
    """Homogeneous coordinates scaled so the first nonzero entry is 1."""

    field: Field
    coords: tuple

    def __post_init__(self):
        F = self.field
        xs = tuple(F(x) for x in self.coords)
        lead = next((x for x in xs if x != 0), None)
        if lead is None:
            raise ValueError("all homogeneous coordinates are zero")
        inv = F.inv(lead)
        object.__setattr__(self, "coords", tuple(F.mul(inv, x) for x in xs))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def __str__(self):
        return "[" + ":".join(self.field.format(x) for x in self.coords) + "]"


def point_eq(p: ProjPoint, q: ProjPoint) -> bool:
    """Equal iff every 2x2 minor x_i y_j - y_i x_j vanishes."""
    if p.n != q.n or p.field != q.field:
        raise ValueError("points of different projective spaces")
    F = p.field
    x, y = p.coords, q.coords
    return all(
        F.sub(F.mul(x[i], y[j]), F.mul(y[i], x[j])) == 0
        for i in range(len(x))
        for j in range(len(x))
        if i != j
    )


def chart_cover(p: ProjPoint) -> set[int]:
    """Indices i of the standard charts U_i = (x_i != 0) containing p."""
    return {i for i, x in enumerate(p.coords) if x != 0}


def dehomogenize(p: ProjPoint, i: int) -> tuple:
    """Affine coordinates x_j / x_i (j != i) in chart i."""
    F = p.field
    xi = p.coords[i]
    if xi == 0:
        raise ValueError(f"{p} is not in chart {i}")
    inv = F.inv(xi)
    return tuple(F.mul(inv, x) for j, x in enumerate(p.coords) if j != i)


def projective_points(n: int, F: Field) -> Iterator[ProjPoint]:
    """Every F-point of P^n, one normalized representative each."""
    q = F.characteristic
    for k in range(n + 1):
        # first nonzero coordinate at position k, equal to 1
        for tail in product(range(q), repeat=n - k):
            yield ProjPoint(F, (0,) * k + (1,) + tail)


# ---------------------------------------------------------------------------
# Laurent units and twists


def laurent_ring(F: Field = QQ, name: str = "X") -> PolyRing:
    return PolyRing(F, (name,), frozenset({0}))


def classify_unit(g: MultiPoly) -> tuple[Scalar, int]:
    """A Laurent polynomial over a field is a unit iff it is a single term
    alpha * X^n; returns (alpha, n)."""
    if g.ring.nvars != 1:
        raise NotAUnit("Laurent polynomial in one variable expected")
    terms = g.terms()
    if len(terms) != 1:
        raise NotAUnit(f"{g} has {len(terms)} terms")
    (n,), alpha = terms[0]
    return alpha, n


@dataclass(frozen=True)
class TwistGlue:
    unit: MultiPoly

    def __post_init__(self):
        classify_unit(self.unit)

    def __str__(self):
        return str(self.unit)


def twist_glue(d: int, F: Field = QQ) -> TwistGlue:
    return TwistGlue(laurent_ring(F).monomial([-d]))


def tensor_glue(a: TwistGlue, b: TwistGlue) -> TwistGlue:
    return TwistGlue(a.unit * b.unit)


def bundle_degree(g: TwistGlue) -> int:
    _, n = classify_unit(g.unit)
    return -n


def p1_sections_via_charts(g: TwistGlue, degree_bound: int) -> int:
    """Global sections of the bundle glued by ``g`` on P^1, as the pullback
    k[t] x_{k[t, 1/t]} k[1/t] twisted by g.

    Pairs (a(t), b(1/t)) of degree <= ``degree_bound`` with b = g a on the
    overlap; the answer is the kernel dimension of (a, b) -> g a - b.
    """
    F = g.unit.ring.field
    alpha, shift = classify_unit(g.unit)
    D = degree_bound
    # a_i t^i  -> alpha t^(i + shift);  b_j t^(-j) -> -t^(-j)
    lo = min(-D, shift)
    hi = max(D + shift, 0)
    rows = []
    for e in range(lo, hi + 1):
        row = [alpha if i + shift == e else F.zero for i in range(D + 1)]
        row += [F.neg(F.one) if -j == e else F.zero for j in range(D + 1)]
        rows.append(row)
    M = Matrix.from_rows(F, rows, 2 * (D + 1))
    return 2 * (D + 1) - rank(M)


# ---------------------------------------------------------------------------
# cohomology of O(d) on P^n


@dataclass(frozen=True)
class TwistSpec:
    n: int
    d: int
    field: Field = QQ


@lru_cache(maxsize=None)
def _complex_dims(n: int, negative: frozenset, F: Field) -> tuple[int, ...]:
    """Cohomology of the Cech complex spanned by X^e for a multidegree whose
    negative entries sit at ``negative``: X^e is a section over U_S exactly
    when S contains every index with e_i < 0."""
    free = [i for i in range(n + 1) if i not in negative]
    by_degree: list[list[tuple]] = []
    for k in range(n + 1):
        size = k + 1 - len(negative)
        if size < 0:
            by_degree.append([])
            continue
        by_degree.append(
            [tuple(sorted(negative | set(extra))) for extra in combinations(free, size)]
        )
    mats = []
    for k in range(n):
        src, dst = by_degree[k], by_degree[k + 1]
        pos = {S: r for r, S in enumerate(dst)}
        rows = [[F.zero] * len(src) for _ in dst]
        for c, S in enumerate(src):
            for t in range(n + 1):
                if t in S:
                    continue
                T = tuple(sorted(S + (t,)))
                j = T.index(t)
                rows[pos[T]][c] = F.one if j % 2 == 0 else F.neg(F.one)
        mats.append(Matrix.from_rows(F, rows, len(src)))
    return tuple(cohomology_dims(mats, [len(b) for b in by_degree]))


def _window(spec: TwistSpec, margin: int) -> tuple[int, int]:
    n, d = spec.n, spec.d
    return -(abs(d) + n + 1 + margin), abs(d) + margin


def multidegrees(spec: TwistSpec, margin: int = 0) -> Iterator[tuple[int, ...]]:
    """Exponent vectors e in the window with sum(e) = d, in sorted order."""
    lo, hi = _window(spec, margin)
    for head in product(range(lo, hi + 1), repeat=spec.n):
        last = spec.d - sum(head)
        if lo <= last <= hi:
            yield head + (last,)


def cohomology_contributions(spec: TwistSpec, margin: int = 0) -> dict[tuple, tuple[int, ...]]:
    """Nonzero per-multidegree cohomology."""
    out = {}
    for e in multidegrees(spec, margin):
        neg = frozenset(i for i, x in enumerate(e) if x < 0)
        dims = _complex_dims(spec.n, neg, spec.field)
        if any(dims):
            out[e] = dims
    return out


def _sum_dims(spec: TwistSpec, margin: int) -> list[int]:
    total = [0] * (spec.n + 1)
    for dims in cohomology_contributions(spec, margin).values():
        total = [a + b for a, b in zip(total, dims)]
    return total


def cohomology_Pn(spec: TwistSpec, window_margin: int = 0) -> list[int]:
    """dim H^q(P^n, O(d)) for q = 0..n, with a window-stability self-check."""
    if spec.n < 1 or spec.n > MAX_N or abs(spec.d) > MAX_ABS_D:
        raise CapExceeded(f"need 1 <= n <= {MAX_N} and |d| <= {MAX_ABS_D}")
    if window_margin < 0:
        raise ValueError("window margin must be non-negative")
    dims = _sum_dims(spec, window_margin)
    wider = _sum_dims(spec, window_margin + 1)
    if dims != wider:
        raise WindowInstability(f"margin {window_margin}: {dims}, margin {window_margin + 1}: {wider}")
    return dims


def closed_form_dims(spec: TwistSpec) -> list[int]:
    """Independent oracle: H^0 = C(n+d, n) for d >= 0, H^n = C(-d-1, n) for
    d <= -n-1, everything else zero."""
    n, d = spec.n, spec.d
    dims = [0] * (n + 1)
    if d >= 0:
        dims[0] = comb(n + d, n)
    if d <= -n - 1:
        dims[n] += comb(-d - 1, n)
    return dims


def euler_characteristic(n: int, d: int) -> int:
    """C(n+d, n) as a polynomial in d: (d+1)(d+2)...(d+n)/n!."""
    num = 1
    for k in range(1, n + 1):
        num *= d + k
    den = 1
    for k in range(1, n + 1):
        den *= k
    return num // den
