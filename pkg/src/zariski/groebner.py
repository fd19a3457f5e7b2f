"""Buchberger's algorithm and the decision procedures built on it.

Polynomials are handled internally as plain ``dict`` objects (exponent tuple
to coefficient) so the reduction loops avoid object churn; the public API
speaks :class:`~zariski.polyfield.poly.MultiPoly`.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Optional, Sequence

from .polyfield.field import Field
from .polyfield.poly import MultiPoly, PolyRing, RingMismatch, grevlex_key

INFINITE = "infinite"


@dataclass(frozen=True)
class TermOrder:
    """Monomial order: ``grevlex``, ``lex`` or ``block`` (grevlex on the first
    ``elim`` variables, ties broken by grevlex on the rest).

    ``perm`` lists variable indices from most to least significant.
    """

    kind: str = "grevlex"
    elim: int = 0
    perm: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if self.kind == "block" and self.elim < 0:
            raise ValueError("block order needs elim >= 0")

    def key(self) -> Callable[[tuple], tuple]:
        return _order_key(self)

    @classmethod
    def parse(cls, text: str) -> "TermOrder":
        t = text.strip()
        if t in ("grevlex", "lex"):
            return cls(t)
        if t.startswith("block:"):
            return cls("block", int(t[6:]))
        raise ValueError(f"bad term order {text!r}; expected grevlex, lex or block:<k>")

    def __str__(self):
        return f"block:{self.elim}" if self.kind == "block" else self.kind


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


@lru_cache(maxsize=None)
def _order_key(order: TermOrder):
    perm = order.perm
    if order.kind == "lex":
        if perm is None:
            return lambda m: m
        return lambda m: tuple(m[i] for i in perm)
    if order.kind == "grevlex":
        if perm is None:
            return grevlex_key
        return lambda m: grevlex_key([m[i] for i in perm])
    k = order.elim
    if perm is None:
        return lambda m: (grevlex_key(m[:k]), grevlex_key(m[k:]))
    return lambda m: (
        grevlex_key([m[i] for i in perm[:k]]),
        grevlex_key([m[i] for i in perm[k:]]),
    )


# ---------------------------------------------------------------------------
# dict-level kernels


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _mdiv(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _sub_mul(F: Field, p: dict, q: dict, c, shift: tuple) -> None:
    """In place: p -= c * x^shift * q."""
    for m, v in q.items():
        mm = tuple(x + y for x, y in zip(m, shift))
        s = F.sub(p.get(mm, F.zero), F.mul(c, v))
        if s == 0:
            p.pop(mm, None)
        else:
            p[mm] = s


class _Basis:
    """Working basis: polys with leading monomial and coefficient."""

    def __init__(self, F: Field, key):
        self.F = F
        self.key = key
        self.polys: list[dict] = []
        self.lms: list[tuple] = []
        self.lcs: list = []
        self.cofs: list[Optional[list[dict]]] = []

    def lead(self, p: dict) -> tuple:
        return max(p, key=self.key)

    def find_reducer(self, m: tuple, active: Iterable[int]) -> int:
        for i in active:
            if _divides(self.lms[i], m):
                return i
        return -1

    def reduce(self, p: dict, active: Sequence[int], cof: Optional[list[dict]] = None) -> dict:
        """Full normal form of ``p`` (consumed) against ``active`` basis elements."""
        F, key = self.F, self.key
        rem: dict = {}
        while p:
            m = max(p, key=key)
            c = p[m]
            i = self.find_reducer(m, active)
            if i < 0:
                rem[m] = c
                del p[m]
                continue
            factor = F.div(c, self.lcs[i])
            shift = _mdiv(m, self.lms[i])
            _sub_mul(F, p, self.polys[i], factor, shift)
            p.pop(m, None)
            if cof is not None:
                for acc, ci in zip(cof, self.cofs[i]):
                    _sub_mul(F, acc, ci, factor, shift)
        return rem

    def add(self, p: dict, cof: Optional[list[dict]] = None) -> int:
        lm = self.lead(p)
        self.polys.append(p)
        self.lms.append(lm)
        self.lcs.append(p[lm])
        self.cofs.append(cof)
        return len(self.polys) - 1


def _buchberger(F: Field, key, gens: list[dict], track: bool = False) -> _Basis:
    B = _Basis(F, key)
    active: list[int] = []
    pending: set[tuple[int, int]] = set()
    heap: list = []
    nvars = len(next(iter(gens[0]))) if gens else 0

    def push_pairs(new: int):
        for i in list(active):
            if i == new:
                continue
            lcm = _lcm(B.lms[i], B.lms[new])
            pr = (min(i, new), max(i, new))
            pending.add(pr)
            heapq.heappush(heap, (sum(lcm), key(lcm), pr))

    def insert(p: dict, cof):
        idx = B.add(p, cof)
        active.append(idx)
        push_pairs(idx)

    for k, g in enumerate(gens):
        cof = None
        if track:
            cof = [{} for _ in gens]
            cof[k] = {(0,) * nvars: F.one}
        p = B.reduce(dict(g), active, cof)
        if p:
            insert(p, cof)

    while heap:
        _, _, (i, j) = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        lmi, lmj = B.lms[i], B.lms[j]
        lcm = _lcm(lmi, lmj)
        # product criterion
        if all(a == 0 or b == 0 for a, b in zip(lmi, lmj)):
            continue
        # chain criterion
        skip = False
        for k in range(len(B.polys)):
            if k in (i, j) or not _divides(B.lms[k], lcm):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                skip = True
                break
        if skip:
            continue
        s: dict = {}
        ci, cj = F.inv(B.lcs[i]), F.inv(B.lcs[j])
        _sub_mul(F, s, B.polys[i], F.neg(ci), _mdiv(lcm, lmi))
        _sub_mul(F, s, B.polys[j], cj, _mdiv(lcm, lmj))
        cof = None
        if track:
            cof = [{} for _ in gens]
            for acc, c_i in zip(cof, B.cofs[i]):
                _sub_mul(F, acc, c_i, F.neg(ci), _mdiv(lcm, lmi))
            for acc, c_j in zip(cof, B.cofs[j]):
                _sub_mul(F, acc, c_j, cj, _mdiv(lcm, lmj))
        r = B.reduce(s, active, cof)
        if r:
            insert(r, cof)
    B.active = sorted(active)
    return B


def _reduced_basis(F: Field, key, gens: list[dict]) -> list[dict]:
    gens = [g for g in gens if g]
    if not gens:
        return []
    B = _buchberger(F, key, gens)
    idx = sorted(B.active, key=lambda i: key(B.lms[i]))
    minimal = []
    for i in idx:
        if not any(_divides(B.lms[j], B.lms[i]) for j in minimal):
            minimal.append(i)
    out = []
    for i in minimal:
        others = [j for j in minimal if j != i]
        p = dict(B.polys[i])
        lm = B.lms[i]
        lc = p.pop(lm)
        tail = B.reduce(p, others)
        inv = F.inv(lc)
        poly = {m: F.mul(inv, v) for m, v in tail.items()}
        poly[lm] = F.one
        out.append(poly)
    out.sort(key=lambda p: key(max(p, key=key)), reverse=True)
    return out


# ---------------------------------------------------------------------------
# Ideals


class Ideal:
    """An ideal of a polynomial ring, given by generators.

    Reduced Groebner bases are computed on demand and cached per term order.
    """

    def __init__(self, ring: PolyRing, gens: Iterable[MultiPoly] = ()):
        if ring.laurent:
            raise RingMismatch("Groebner bases need a polynomial (non-Laurent) ring")
        self.ring = ring
        gens = list(gens)
        for g in gens:
            if g.ring != ring:
                raise RingMismatch(f"generator {g} is not in {ring}")
        self.gens: tuple[MultiPoly, ...] = tuple(g for g in gens if not g.is_zero())
        self._bases: dict[TermOrder, list[MultiPoly]] = {}
        self._sat: dict[MultiPoly, Ideal] = {}

    @classmethod
    def unit(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, [ring.one])

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.gens)) or '0'})"

    def __add__(self, other: "Ideal | Iterable[MultiPoly]") -> "Ideal":
        more = other.gens if isinstance(other, Ideal) else tuple(other)
        return Ideal(self.ring, self.gens + tuple(more))

    def _check(self, f: MultiPoly):
        if f.ring != self.ring:
            raise RingMismatch(f"{f} is not in {self.ring}")

    def basis(self, order: TermOrder = GREVLEX) -> list[MultiPoly]:
        """Reduced, monic Groebner basis under ``order``, sorted by leading term."""
        if order not in self._bases:
            polys = _reduced_basis(self.ring.field, order.key(), [g._t for g in self.gens])
            self._bases[order] = [MultiPoly(self.ring, p, _clean=True) for p in polys]
        return self._bases[order]

    def normal_form(self, f: MultiPoly, order: TermOrder = GREVLEX) -> MultiPoly:
        self._check(f)
        G = self.basis(order)
        B = _Basis(self.ring.field, order.key())
        for g in G:
            B.add(g._t)
        return MultiPoly(self.ring, B.reduce(dict(f._t), range(len(G))), _clean=True)

    def contains(self, f: MultiPoly, order: TermOrder = GREVLEX) -> bool:
        return self.normal_form(f, order).is_zero()

    def is_unit_ideal(self) -> bool:
        G = self.basis()
        return len(G) == 1 and G[0].is_constant()

    def is_zero_ideal(self) -> bool:
        return not self.gens

    def leading_monomials(self, order: TermOrder = GREVLEX) -> list[tuple]:
        key = order.key()
        return [max(g._t, key=key) for g in self.basis(order)]

    def check_basis(self, order: TermOrder = GREVLEX) -> bool:
        """Generators reduce to zero mod the basis, basis elements lie in the
        ideal, and every S-polynomial of the basis reduces to zero."""
        G = self.basis(order)
        if not all(self.normal_form(g, order).is_zero() for g in self.gens):
            return False
        if self.gens and not all(lift(g, list(self.gens)) is not None for g in G):
            return False
        return buchberger_criterion(G, order)

    def saturate(self, f: MultiPoly) -> "Ideal":
        """(I : f^inf), cached per ``f``."""
        if f not in self._sat:
            self._sat[f] = saturation(self, f)
        return self._sat[f]


def buchberger_criterion(G: Sequence[MultiPoly], order: TermOrder = GREVLEX) -> bool:
    """Every S-polynomial of ``G`` reduces to zero modulo ``G``."""
    if not G:
        return True
    ring = G[0].ring
    F, key = ring.field, order.key()
    B = _Basis(F, key)
    for g in G:
        B.add(dict(g._t))
    idx = range(len(G))
    for i in idx:
        for j in range(i + 1, len(G)):
            lcm = _lcm(B.lms[i], B.lms[j])
            s: dict = {}
            _sub_mul(F, s, B.polys[i], F.neg(F.inv(B.lcs[i])), _mdiv(lcm, B.lms[i]))
            _sub_mul(F, s, B.polys[j], F.inv(B.lcs[j]), _mdiv(lcm, B.lms[j]))
            if B.reduce(s, idx):
                return False
    return True


def buchberger(I: Ideal, order: TermOrder = GREVLEX) -> Ideal:
    """Compute and cache the reduced basis of ``I``; returns ``I``."""
    I.basis(order)
    return I


def membership(f: MultiPoly, I: Ideal, order: TermOrder = GREVLEX) -> bool:
    return I.contains(f, order)


def ideal_contains(I: Ideal, J: Ideal, order: TermOrder = GREVLEX) -> bool:
    """J is a subset of I."""
    if I.ring != J.ring:
        raise RingMismatch("ideals live in different rings")
    return all(I.contains(g, order) for g in J.gens)


def lift(f: MultiPoly, gens: Sequence[MultiPoly]) -> Optional[list[MultiPoly]]:
    """Cofactors ``h`` with ``f = sum h_i gens_i``, or None if f is not in the ideal."""
    ring = f.ring
    if not gens:
        return [] if f.is_zero() else None
    F, key = ring.field, GREVLEX.key()
    nz = [i for i, g in enumerate(gens) if not g.is_zero()]
    if not nz:
        return [ring.zero for _ in gens] if f.is_zero() else None
    B = _buchberger(F, key, [gens[i]._t for i in nz], track=True)
    cof = [{} for _ in nz]
    rem = B.reduce(dict(f._t), B.active, cof)
    if rem:
        return None
    out = [ring.zero for _ in gens]
    for pos, i in enumerate(nz):
        # reduce subtracted multiples, so the representation is the negation
        out[i] = -MultiPoly(ring, cof[pos], _clean=True)
    return out


def _eliminate_front(ring_ext: PolyRing, polys: list[MultiPoly], k: int, ring: PolyRing) -> Ideal:
    """Intersect the ideal of ``polys`` (in ``ring_ext``, whose first ``k``
    variables are auxiliary) with ``ring``."""
    order = TermOrder("block", k)
    G = _reduced_basis(ring_ext.field, order.key(), [p._t for p in polys])
    kept = []
    for p in G:
        if all(not any(m[:k]) for m in p):
            kept.append(MultiPoly(ring, {m[k:]: c for m, c in p.items()}, _clean=True))
    out = Ideal(ring, kept)
    # a T-free part of a reduced block basis is the reduced grevlex basis
    out._bases[GREVLEX] = sorted(
        kept, key=lambda q: grevlex_key(max(q._t, key=grevlex_key)), reverse=True
    )
    return out


def eliminate(I: Ideal, variables: Sequence[int | str]) -> Ideal:
    """I intersected with the subring in the remaining variables.

    The result lives in the ring of the remaining variables (original order).
    """
    ring = I.ring
    idx = [ring.index(v) if isinstance(v, str) else v for v in variables]
    rest = [i for i in range(ring.nvars) if i not in idx]
    perm = idx + rest
    ext = PolyRing(ring.field, tuple(ring.names[i] for i in perm))
    pos = [perm.index(i) for i in range(ring.nvars)]
    polys = [g.embed(ext, pos) for g in I.gens]
    small = PolyRing(ring.field, tuple(ring.names[i] for i in rest))
    return _eliminate_front(ext, polys, len(idx), small)


def _with_aux(ring: PolyRing) -> tuple[PolyRing, list[int]]:
    name = ring.fresh_name("T")
    ext = ring.extend([name], front=True)
    return ext, list(range(1, ring.nvars + 1))


def saturation(I: Ideal, f: MultiPoly) -> Ideal:
    """(I : f^inf) via the Rabinowitsch trick: eliminate T from I + (1 - T f)."""
    I._check(f)
    if f.is_zero():
        raise ValueError("saturation by the zero polynomial")
    ext, pos = _with_aux(I.ring)
    T = ext.gen(0)
    polys = [g.embed(ext, pos) for g in I.gens] + [ext.one - T * f.embed(ext, pos)]
    return _eliminate_front(ext, polys, 1, I.ring)


def radical_membership(f: MultiPoly, I: Ideal) -> bool:
    """f lies in the radical of I iff 1 is in I + (1 - T f)."""
    I._check(f)
    ext, pos = _with_aux(I.ring)
    T = ext.gen(0)
    J = Ideal(ext, [g.embed(ext, pos) for g in I.gens] + [ext.one - T * f.embed(ext, pos)])
    return J.is_unit_ideal()


def is_unimodular(fs: Sequence[MultiPoly], I: Ideal) -> bool:
    for f in fs:
        I._check(f)
    return (I + fs).is_unit_ideal()


def unimodular_witness(fs: Sequence[MultiPoly], I: Ideal) -> Optional[list[MultiPoly]]:
    """Coefficients ``r`` with ``sum r_i f_i = 1`` modulo I, or None."""
    cof = lift(I.ring.one, list(fs) + list(I.gens))
    if cof is None:
        return None
    return [I.normal_form(c) for c in cof[: len(fs)]]


def intersection(I: Ideal, J: Ideal) -> Ideal:
    """I cap J = (t I + (1 - t) J) cap k[x]."""
    if I.ring != J.ring:
        raise RingMismatch("ideals live in different rings")
    ext, pos = _with_aux(I.ring)
    t = ext.gen(0)
    polys = [t * g.embed(ext, pos) for g in I.gens]
    polys += [(ext.one - t) * g.embed(ext, pos) for g in J.gens]
    return _eliminate_front(ext, polys, 1, I.ring)


def exact_divide(p: MultiPoly, f: MultiPoly) -> MultiPoly:
    """p / f, raising ValueError unless f divides p."""
    if f.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    F, key = p.ring.field, GREVLEX.key()
    rest = dict(p._t)
    q: dict = {}
    lm = max(f._t, key=key)
    lc = f._t[lm]
    while rest:
        m = max(rest, key=key)
        if not _divides(lm, m):
            raise ValueError(f"{f} does not divide {p}")
        c = F.div(rest[m], lc)
        shift = _mdiv(m, lm)
        q[shift] = c
        _sub_mul(F, rest, f._t, c, shift)
        rest.pop(m, None)
    return MultiPoly(p.ring, q, _clean=True)


def ideal_quotient(I: Ideal, f: MultiPoly) -> Ideal:
    """(I : f) computed as (I cap (f)) / f."""
    I._check(f)
    if f.is_zero():
        return Ideal.unit(I.ring)
    meet = intersection(I, Ideal(I.ring, [f]))
    return Ideal(I.ring, [exact_divide(g, f) for g in meet.gens])


def is_regular(f: MultiPoly, I: Ideal) -> bool:
    """Multiplication by f is injective on k[x]/I, i.e. (I : f) is contained in I."""
    I._check(f)
    if I.is_unit_ideal():
        return True
    return ideal_contains(I, ideal_quotient(I, f))


def standard_monomials(I: Ideal, max_degree: Optional[int] = None) -> list[tuple]:
    """Monomials outside the leading-term ideal, ascending in grevlex.

    Without ``max_degree`` the quotient must be finite-dimensional.
    """
    n = I.ring.nvars
    lms = I.leading_monomials()
    if any(not any(m) for m in lms):
        return []
    if max_degree is None:
        bounds = []
        for i in range(n):
            pure = [m[i] for m in lms if all(e == 0 for j, e in enumerate(m) if j != i) and m[i]]
            if not pure:
                raise ValueError("quotient is infinite-dimensional")
            bounds.append(min(pure))
        cands = product(*(range(b) for b in bounds))
    else:
        cands = (m for m in product(range(max_degree + 1), repeat=n) if sum(m) <= max_degree)
    out = [m for m in cands if not any(_divides(lm, m) for lm in lms)]
    out.sort(key=grevlex_key)
    return out


def k_dimension(I: Ideal):
    """Vector-space dimension of k[x]/I, or ``INFINITE``."""
    try:
        return len(standard_monomials(I))
    except ValueError:
        return INFINITE
