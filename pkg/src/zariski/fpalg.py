"""Finitely presented algebras k[x_1..x_n]/(f_1..f_m) and their homomorphisms.

Elements are represented by polynomials in normal form against the reduced
grevlex basis of the relation ideal, so equality of elements (and of
homomorphisms, compared on generator images) is structural.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator, Optional, Sequence

from .groebner import INFINITE, Ideal, k_dimension, standard_monomials
from .polyfield.field import Field, PrimeField
from .polyfield.poly import MultiPoly, PolyRing, RingMismatch

DEFAULT_CAP = 10**6


class WellDefinednessFailure(ValueError):
    def __init__(self, relation: MultiPoly, image: MultiPoly):
        super().__init__(f"relation {relation} maps to {image}, which is nonzero in the target")
        self.relation = relation
        self.image = image


class SolutionInvalid(ValueError):
    def __init__(self, relation: MultiPoly, value: MultiPoly):
        super().__init__(f"relation {relation} evaluates to {value} != 0 at the solution")
        self.relation = relation
        self.value = value


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    """(n, m, q_1..q_m): generator count plus relations in k[x_1..x_n]."""

    ring: PolyRing
    relations: tuple[MultiPoly, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        for q in self.relations:
            if q.ring != self.ring:
                raise RingMismatch(f"relation {q} has the wrong arity")

    @classmethod
    def of(cls, field_: Field, names: Sequence[str], relations: Sequence = ()) -> "Presentation":
        from .polyfield.parse import parse_poly

        ring = PolyRing(field_, tuple(names))
        rels = [parse_poly(r, ring) if isinstance(r, str) else r for r in relations]
        return cls(ring, tuple(rels))

    @property
    def n(self) -> int:
        return self.ring.nvars

    @property
    def m(self) -> int:
        return len(self.relations)


class FPAlgebra:
    def __init__(self, ring: PolyRing, relations: Sequence[MultiPoly] = ()):
        self.ring = ring
        self.relations: tuple[MultiPoly, ...] = tuple(relations)
        for q in self.relations:
            if q.ring != ring:
                raise RingMismatch(f"relation {q} is not in {ring}")
        self.ideal = Ideal(ring, self.relations)

    @classmethod
    def from_presentation(cls, p: Presentation) -> "FPAlgebra":
        return cls(p.ring, p.relations)

    @classmethod
    def of(cls, field_: Field, names: Sequence[str], relations: Sequence = ()) -> "FPAlgebra":
        return cls.from_presentation(Presentation.of(field_, names, relations))

    @property
    def presentation(self) -> Presentation:
        return Presentation(self.ring, self.relations)

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def n(self) -> int:
        return self.ring.nvars

    @property
    def names(self) -> tuple[str, ...]:
        return self.ring.names

    def gens(self) -> list[MultiPoly]:
        return self.ring.gens()

    def __eq__(self, other):
        return (
            isinstance(other, FPAlgebra)
            and self.ring == other.ring
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.ring, self.relations))

    def __repr__(self):
        rels = ", ".join(map(str, self.relations))
        return f"{self.field!r}[{', '.join(self.names)}]/({rels})"

    def element(self, p) -> MultiPoly:
        if isinstance(p, str):
            from .polyfield.parse import parse_poly

            p = parse_poly(p, self.ring)
        elif not isinstance(p, MultiPoly):
            p = self.ring.const(p)
        return self.normal_form(p)

    def normal_form(self, p: MultiPoly) -> MultiPoly:
        return self.ideal.normal_form(p)

    def eq(self, a: MultiPoly, b: MultiPoly) -> bool:
        return self.ideal.contains(a - b)

    def is_trivial(self) -> bool:
        """Zero ring iff 1 lies in the relation ideal."""
        return self.ideal.is_unit_ideal()

    def k_dimension(self):
        return k_dimension(self.ideal)

    def is_finite_dimensional(self) -> bool:
        return self.k_dimension() != INFINITE

    def basis_monomials(self, max_degree: Optional[int] = None) -> list[tuple]:
        if max_degree is None or self.is_finite_dimensional():
            return standard_monomials(self.ideal)
        return standard_monomials(self.ideal, max_degree)

    def elements(self, cap: int = DEFAULT_CAP, max_degree: Optional[int] = None) -> list[MultiPoly]:
        """Every element over a finite field (or those supported on standard
        monomials of degree <= ``max_degree`` when the algebra is infinite)."""
        F = self.field
        if not F.is_finite():
            raise CapExceeded("cannot enumerate elements over an infinite field")
        if not self.is_finite_dimensional() and max_degree is None:
            raise CapExceeded("infinite-dimensional algebra needs a degree bound")
        mons = self.basis_monomials(max_degree)
        if F.characteristic ** len(mons) > cap:
            raise CapExceeded(f"{F.characteristic}^{len(mons)} elements exceed cap {cap}")
        out = []
        for coeffs in product(range(F.characteristic), repeat=len(mons)):
            out.append(MultiPoly(self.ring, dict(zip(mons, coeffs))))
        return out


@dataclass(frozen=True)
class RationalPoint:
    coords: tuple

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def lies_on(self, A: FPAlgebra) -> bool:
        return all(q.evaluate(self.coords) == 0 for q in A.relations)


class AlgHom:
    """Homomorphism A -> B given by the images of A's generators.

    Well-definedness (every relation of A maps into B's ideal) is checked on
    construction.
    """

    def __init__(self, source: FPAlgebra, target: FPAlgebra, images: Sequence[MultiPoly], check: bool = True):
        if source.field != target.field:
            raise RingMismatch("source and target have different base fields")
        if len(images) != source.n:
            raise RingMismatch(f"{len(images)} images for {source.n} generators")
        self.source = source
        self.target = target
        self.images = tuple(target.normal_form(im) for im in images)
        self._mono: dict[tuple, MultiPoly] = {}
        if check:
            for q in source.relations:
                im = self.apply(q)
                if not im.is_zero():
                    raise WellDefinednessFailure(q, im)

    @classmethod
    def identity(cls, A: FPAlgebra) -> "AlgHom":
        return cls(A, A, A.gens(), check=False)

    def _image_of_monomial(self, m: tuple) -> MultiPoly:
        if m not in self._mono:
            T = self.target
            p = T.ring.one
            for im, e in zip(self.images, m):
                for _ in range(e):
                    p = T.normal_form(p * im)
            self._mono[m] = p
        return self._mono[m]

    def apply(self, p: MultiPoly) -> MultiPoly:
        """Image of ``p`` in normal form."""
        if p.ring != self.source.ring:
            raise RingMismatch(f"{p} is not in the source ring")
        acc = self.target.ring.zero
        for m, c in p.as_dict().items():
            acc = acc + self._image_of_monomial(m).scale(c)
        return acc

    __call__ = apply

    def compose(self, inner: "AlgHom") -> "AlgHom":
        """self o inner."""
        if inner.target != self.source:
            raise RingMismatch("composition of non-composable homomorphisms")
        return AlgHom(inner.source, self.target, [self.apply(im) for im in inner.images], check=False)

    def __eq__(self, other):
        return (
            isinstance(other, AlgHom)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def __repr__(self):
        pairs = ", ".join(f"{n} -> {im}" for n, im in zip(self.source.names, self.images))
        return f"AlgHom({pairs})"


def hom(A: FPAlgebra, B: FPAlgebra, images: Sequence) -> AlgHom:
    ims = [B.element(im) for im in images]
    return AlgHom(A, B, ims)


def induced_hom(xi: Presentation, target: FPAlgebra, solution: Sequence, base: Optional[AlgHom] = None) -> AlgHom:
    """The unique map L_xi -> M sending the generators of xi to ``solution``.

    Without ``base`` the stage is the ground field. With ``base: L -> M`` the
    source is the extension of L by xi (see :func:`extend_stage`) and the map
    restricts to ``base`` on L.
    """
    sol = [target.element(s) for s in solution]
    if len(sol) != xi.n:
        raise RingMismatch(f"solution has {len(sol)} entries, presentation has {xi.n} generators")
    if base is None:
        L_xi = FPAlgebra.from_presentation(xi)
        images = sol
    else:
        L_xi, _, _ = extend_stage(base.source, xi)
        images = list(base.images) + sol
    for q in L_xi.relations:
        val = target.normal_form(q.substitute(images, target.ring))
        if not val.is_zero():
            raise SolutionInvalid(q, val)
    return AlgHom(L_xi, target, images, check=False)


def extend_stage(L: FPAlgebra, xi: Presentation) -> tuple[FPAlgebra, AlgHom, tuple[MultiPoly, ...]]:
    """L_xi = L[X]/(q), the inclusion iota: L -> L_xi and the generic solution s_xi."""
    if L.n == 0 and not L.relations:
        L_xi = FPAlgebra.from_presentation(xi)
    else:
        names = list(L.names)
        for nm in xi.ring.names:
            while nm in names:
                nm = nm + "'"
            names.append(nm)
        ring = PolyRing(L.field, tuple(names))
        shift = list(range(L.n, L.n + xi.n))
        rels = [q.embed(ring, list(range(L.n))) for q in L.relations]
        rels += [q.embed(ring, shift) for q in xi.relations]
        L_xi = FPAlgebra(ring, rels)
    gens = L_xi.gens()
    iota = AlgHom(L, L_xi, gens[: L.n], check=False)
    s_xi = tuple(L_xi.normal_form(g) for g in gens[L.n:])
    return L_xi, iota, s_xi


def _disjoint_names(a: Sequence[str], b: Sequence[str]) -> list[str]:
    out = list(a)
    for nm in b:
        while nm in out:
            nm = nm + "'"
        out.append(nm)
    return out


def tensor(A: FPAlgebra, B: FPAlgebra, over: Optional[tuple[FPAlgebra, AlgHom, AlgHom]] = None):
    """A (x)_C B with its two structure maps.

    Generators are the disjoint union; relations are the union plus, over C,
    f(c) - g(c) for each generator c of C.
    """
    if A.field != B.field:
        raise RingMismatch("tensor product of algebras over different fields")
    names = _disjoint_names(A.names, B.names)
    ring = PolyRing(A.field, tuple(names))
    pa = list(range(A.n))
    pb = list(range(A.n, A.n + B.n))
    rels = [q.embed(ring, pa) for q in A.relations] + [q.embed(ring, pb) for q in B.relations]
    if over is not None:
        C, f, g = over
        if f.source != C or g.source != C or f.target != A or g.target != B:
            raise RingMismatch("base maps do not match C -> A and C -> B")
        for fa, gb in zip(f.images, g.images):
            rels.append(fa.embed(ring, pa) - gb.embed(ring, pb))
    AB = FPAlgebra(ring, rels)
    gens = ring.gens()
    ia = AlgHom(A, AB, gens[: A.n], check=False)
    ib = AlgHom(B, AB, gens[A.n:], check=False)
    return AB, ia, ib


def localize(A: FPAlgebra, f: MultiPoly):
    """A_f = A[Y]/(Y f - 1) with the canonical map A -> A_f."""
    if f.ring != A.ring:
        raise RingMismatch(f"{f} is not in {A.ring}")
    base = "y" if A.names and all(n.islower() for n in A.names) else "Y"
    y = A.ring.fresh_name(base)
    ring = A.ring.extend([y])
    pos = list(range(A.n))
    Y = ring.gen(A.n)
    rels = [q.embed(ring, pos) for q in A.relations] + [Y * f.embed(ring, pos) - ring.one]
    Af = FPAlgebra(ring, rels)
    return Af, AlgHom(A, Af, ring.gens()[: A.n], check=False)


# ---------------------------------------------------------------------------
# points over prime fields


def _scan(relations: Sequence[MultiPoly], p: int, n: int, first: Optional[int]) -> list[tuple]:
    heads = range(p) if first is None else [first]
    rel_terms = [list(q.as_dict().items()) for q in relations]
    out = []
    pts = product(heads, *(range(p) for _ in range(n - 1))) if n else [()]
    for pt in pts:
        ok = True
        for terms in rel_terms:
            v = 0
            for m, c in terms:
                t = c
                for x, e in zip(pt, m):
                    if e:
                        t = t * pow(x, e, p)
                v += t
            if v % p:
                ok = False
                break
        if ok:
            out.append(pt)
    return out


def spec_points(A: FPAlgebra, cap: int = DEFAULT_CAP, jobs: int = 1) -> list[RationalPoint]:
    """All F_p-points, lexicographically sorted."""
    F = A.field
    if not isinstance(F, PrimeField):
        raise RingMismatch("point enumeration needs a prime field")
    p, n = F.p, A.n
    if p**n > cap:
        raise CapExceeded(f"{p}^{n} candidate points exceed cap {cap}")
    if A.is_trivial():
        return []
    if jobs > 1 and n >= 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_scan, [A.relations] * p, [p] * p, [n] * p, range(p)))
        pts = [pt for chunk in chunks for pt in chunk]
    else:
        pts = _scan(A.relations, p, n, None)
    return [RationalPoint(pt) for pt in sorted(pts)]


def spec_map(h: AlgHom) -> Callable[[RationalPoint], RationalPoint]:
    """Spec h: points of the target go to points of the source."""

    def pull(x: RationalPoint) -> RationalPoint:
        return RationalPoint(tuple(im.evaluate(tuple(x)) for im in h.images))

    return pull


# ---------------------------------------------------------------------------
# external roundtrip phi / psi


@dataclass
class Check:
    name: str
    passed: bool
    count: int = 0
    detail: str = ""


@dataclass
class RoundtripReport:
    elements: int
    indices: int
    truncated: bool
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def homs_between(A: FPAlgebra, M: FPAlgebra, cap: int = DEFAULT_CAP) -> list[AlgHom]:
    """Every homomorphism A -> M for finite M, i.e. solutions of A's relations in M."""
    elems = M.elements(cap)
    if len(elems) ** A.n > cap:
        raise CapExceeded(f"{len(elems)}^{A.n} candidate homomorphisms exceed cap {cap}")
    out = []
    for ims in product(elems, repeat=A.n):
        try:
            out.append(AlgHom(A, M, ims))
        except WellDefinednessFailure:
            continue
    return out


def sqc_roundtrip(
    xi: Presentation,
    stage: FPAlgebra,
    family: Sequence[FPAlgebra],
    cap: int = DEFAULT_CAP,
    max_degree: int = 2,
) -> RoundtripReport:
    """Check that psi(phi u) = u and (phi(psi l))_{f,s} = l_{f,s}.

    phi u is the family (f, s) -> i(f, s) u over all test indices: every
    homomorphism f: L -> M with a solution s of xi in M, for M in ``family``,
    together with the generic index (iota, s_xi) at M = L_xi. psi reads a
    family off at the generic index. Naturality of phi u along maps between
    the finite stages is checked as well.
    """
    L_xi, iota, s_xi = extend_stage(stage, xi)
    truncated = not L_xi.is_finite_dimensional()
    elems = L_xi.elements(cap, max_degree if truncated else None)

    indices: list[tuple[FPAlgebra, AlgHom]] = []  # (M, i(f, s))
    for M in family:
        if M.field != stage.field:
            raise RingMismatch("test stage over a different field")
        for h in homs_between(L_xi, M, cap):
            indices.append((M, h))
    generic = AlgHom(L_xi, L_xi, list(iota.images) + list(s_xi), check=False)
    n_L = stage.n

    def phi(u: MultiPoly) -> list[MultiPoly]:
        return [h.apply(u) for _, h in indices]

    def psi_of(u: MultiPoly) -> MultiPoly:
        return generic.apply(u)

    report = RoundtripReport(len(elems), len(indices) + 1, truncated)

    bad = [u for u in elems if psi_of(u) != L_xi.normal_form(u)]
    report.checks.append(Check("psi_phi_identity", not bad, len(elems), f"{len(bad)} failures"))

    fails = 0
    for u in elems:
        l_vals = phi(u)
        back = psi_of(u)
        for (_, h), lv in zip(indices, l_vals):
            if h.apply(back) != lv:
                fails += 1
    report.checks.append(
        Check("phi_psi_identity", fails == 0, len(elems) * len(indices), f"{fails} failures")
    )

    fails = 0
    for M, h in indices:
        f = AlgHom(stage, M, h.images[:n_L], check=False)
        if h.compose(iota) != f:
            fails += 1
        if tuple(h.apply(s) for s in s_xi) != h.images[n_L:]:
            fails += 1
    report.checks.append(Check("induced_map_properties", fails == 0, 2 * len(indices), f"{fails} failures"))

    fails = count = 0
    for M, h in indices:
        for N in family:
            for g in homs_between(M, N, cap):
                moved = g.compose(h)
                for u in elems:
                    count += 1
                    if g.apply(h.apply(u)) != moved.apply(u):
                        fails += 1
    report.checks.append(Check("naturality", fails == 0, count, f"{fails} failures"))
    return report
