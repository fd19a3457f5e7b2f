"""Sparse multivariate polynomials over an exact field.

A :class:`PolyRing` fixes the field, the variable names and which variables
may carry negative exponents (Laurent variables). A :class:`MultiPoly` maps
exponent tuples to nonzero coefficients and is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Mapping, Sequence

from .field import Field, FieldError, Scalar

Monomial = tuple


class RingMismatch(ValueError):
    pass


class ZeroPolynomialError(ValueError):
    """The distinguished ``f = 0`` case of the linear factorization."""


class ScanCapExceeded(ValueError):
    pass


def grevlex_key(exps: Sequence[int]) -> tuple:
    return (sum(exps), tuple(-e for e in reversed(exps)))


@dataclass(frozen=True)
class PolyRing:
    field: Field
    names: tuple[str, ...]
    laurent: frozenset[int] = dc_field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "laurent", frozenset(self.laurent))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    @property
    def one(self) -> "MultiPoly":
        return self.const(self.field.one)

    def const(self, c) -> "MultiPoly":
        c = self.field(c)
        return MultiPoly(self, {} if c == 0 else {(0,) * self.nvars: c})

    def gen(self, i: int | str) -> "MultiPoly":
        if isinstance(i, str):
            i = self.index(i)
        exps = [0] * self.nvars
        exps[i] = 1
        return MultiPoly(self, {tuple(exps): self.field.one})

    def gens(self) -> list["MultiPoly"]:
        return [self.gen(i) for i in range(self.nvars)]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise RingMismatch(f"unknown variable {name!r}") from None

    def monomial(self, exps: Sequence[int], coeff=None) -> "MultiPoly":
        c = self.field.one if coeff is None else self.field(coeff)
        return MultiPoly(self, {tuple(exps): c})

    def from_terms(self, terms: Iterable[tuple[Sequence[int], object]]) -> "MultiPoly":
        acc: dict = {}
        F = self.field
        for exps, c in terms:
            exps = tuple(exps)
            c = F(c)
            acc[exps] = F.add(acc.get(exps, F.zero), c)
        return MultiPoly(self, acc)

    def extend(self, names: Sequence[str], front: bool = False) -> "PolyRing":
        """Ring with extra variables appended (or prepended)."""
        names = tuple(names)
        new = names + self.names if front else self.names + names
        shift = len(names) if front else 0
        return PolyRing(self.field, new, frozenset(i + shift for i in self.laurent))

    def fresh_name(self, base: str = "T") -> str:
        name, k = base, 0
        while name in self.names:
            k += 1
            name = f"{base}{k}"
        return name

    def __repr__(self):
        return f"PolyRing({self.field!r}, {list(self.names)})"


class MultiPoly:
    """Immutable sparse polynomial. ``terms`` maps exponent tuples to coefficients."""

    __slots__ = ("ring", "_t", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, Scalar], _clean: bool = False):
        self.ring = ring
        if _clean:
            self._t = dict(terms)
        else:
            n = ring.nvars
            t = {}
            for m, c in terms.items():
                if c == 0:
                    continue
                if len(m) != n:
                    raise RingMismatch(f"monomial {m} has arity {len(m)}, ring has {n}")
                for i, e in enumerate(m):
                    if e < 0 and i not in ring.laurent:
                        raise ValueError(
                            f"negative exponent on non-invertible variable {ring.names[i]}"
                        )
                t[tuple(m)] = c
            self._t = t
        self._hash = None

    # -- access -----------------------------------------------------------
    def terms(self) -> list[tuple[Monomial, Scalar]]:
        """Terms in descending grevlex order (the canonical order)."""
        return sorted(self._t.items(), key=lambda mc: grevlex_key(mc[0]), reverse=True)

    def as_dict(self) -> dict[Monomial, Scalar]:
        return dict(self._t)

    def coeff(self, exps: Sequence[int]) -> Scalar:
        return self._t.get(tuple(exps), self.ring.field.zero)

    def __len__(self):
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and not any(next(iter(self._t))))

    def constant_value(self) -> Scalar:
        return self._t.get((0,) * self.ring.nvars, self.ring.field.zero)

    def total_degree(self) -> int:
        if not self._t:
            return -1
        return max(sum(m) for m in self._t)

    def degree(self, var: int | str = 0) -> int:
        if isinstance(var, str):
            var = self.ring.index(var)
        if not self._t:
            return -1
        return max(m[var] for m in self._t)

    def variables_used(self) -> set[int]:
        return {i for m in self._t for i, e in enumerate(m) if e}

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        F = self.ring.field
        t = dict(self._t)
        for m, c in other._t.items():
            s = F.add(t.get(m, F.zero), c)
            if s == 0:
                t.pop(m, None)
            else:
                t[m] = s
        return MultiPoly(self.ring, t, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return MultiPoly(self.ring, {m: F.neg(c) for m, c in self._t.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.ring.field
        t: dict = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = F.add(t.get(m, F.zero), F.mul(c1, c2))
                if s == 0:
                    t.pop(m, None)
                else:
                    t[m] = s
        return MultiPoly(self.ring, t, _clean=True)

    __rmul__ = __mul__

    def scale(self, c) -> "MultiPoly":
        F = self.ring.field
        c = F(c)
        if c == 0:
            return self.ring.zero
        return MultiPoly(self.ring, {m: F.mul(c, v) for m, v in self._t.items()}, _clean=True)

    def mul_monomial(self, exps: Sequence[int], c=None) -> "MultiPoly":
        F = self.ring.field
        c = F.one if c is None else c
        return MultiPoly(
            self.ring,
            {tuple(a + b for a, b in zip(m, exps)): F.mul(c, v) for m, v in self._t.items()},
        )

    def __pow__(self, k: int):
        if k < 0:
            if len(self._t) == 1:
                (m, c), = self._t.items()
                inv = self.ring.monomial([-e for e in m], self.ring.field.inv(c))
                return inv ** (-k)
            raise ValueError("negative power of a non-monomial")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self._t == other._t
        try:
            return self == self.ring.const(other)
        except (TypeError, ValueError, FieldError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._t.items())))
        return self._hash

    # -- evaluation & substitution -----------------------------------------
    def evaluate(self, point: Sequence) -> Scalar:
        """Substitute field values for every variable."""
        F = self.ring.field
        if len(point) != self.ring.nvars:
            raise RingMismatch(f"point has {len(point)} coordinates, ring has {self.ring.nvars}")
        pt = [F(x) for x in point]
        total = F.zero
        for m, c in self._t.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v = F.mul(v, F.pow(x, e))
            total = F.add(total, v)
        return total

    def substitute(self, images: Sequence["MultiPoly"], target: PolyRing | None = None) -> "MultiPoly":
        """Replace variable i by ``images[i]``; all images live in one ring."""
        if len(images) != self.ring.nvars:
            raise RingMismatch(f"{len(images)} images for {self.ring.nvars} variables")
        if target is None:
            if not images:
                raise ValueError("target ring required for a ring without variables")
            target = images[0].ring
        for im in images:
            if im.ring != target:
                raise RingMismatch("images live in different rings")
        if target.field != self.ring.field:
            raise RingMismatch("field mismatch in substitution")
        cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, e: int) -> MultiPoly:
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        result = target.zero
        for m, c in self._t.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def embed(self, target: PolyRing, positions: Sequence[int]) -> "MultiPoly":
        """Relabel variables: variable i goes to ``positions[i]`` of ``target``."""
        n = target.nvars
        t = {}
        for m, c in self._t.items():
            new = [0] * n
            for i, e in enumerate(m):
                new[positions[i]] += e
            t[tuple(new)] = c
        return MultiPoly(target, t)

    # -- display -----------------------------------------------------------
    def __str__(self):
        if not self._t:
            return "0"
        F = self.ring.field
        parts = []
        for m, c in self.terms():
            mono = "*".join(
                (n if e == 1 else f"{n}^{e}") for n, e in zip(self.ring.names, m) if e
            )
            cs = F.format(c)
            if mono:
                if cs == "1":
                    s = mono
                elif cs == "-1":
                    s = "-" + mono
                else:
                    s = f"{cs}*{mono}" if "/" not in cs else f"({cs})*{mono}"
            else:
                s = cs
            parts.append(s)
        out = parts[0]
        for s in parts[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out

    def __repr__(self):
        return f"MultiPoly({self})"


# ---------------------------------------------------------------------------
# univariate helpers


def _univariate_coeffs(f: MultiPoly) -> list:
    """Dense coefficient list, lowest degree first."""
    if f.ring.nvars != 1:
        raise RingMismatch("univariate polynomial expected")
    F = f.ring.field
    d = f.degree(0)
    coeffs = [F.zero] * (d + 1)
    for (e,), c in f._t.items():
        if e < 0:
            raise ValueError("negative exponent in polynomial context")
        coeffs[e] = c
    return coeffs


def _horner(F: Field, coeffs: list, a) -> Scalar:
    v = F.zero
    for c in reversed(coeffs):
        v = F.add(F.mul(v, a), c)
    return v


def _deflate(F: Field, coeffs: list, a) -> list:
    """Quotient of exact division by (X - a); assumes a is a root."""
    n = len(coeffs) - 1
    q = [F.zero] * n
    carry = F.zero
    for i in range(n, 0, -1):
        carry = F.add(coeffs[i], F.mul(carry, a))
        q[i - 1] = carry
    return q


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _rational_root_candidates(coeffs: list) -> list:
    from fractions import Fraction
    from math import lcm

    den = lcm(*(Fraction(c).denominator for c in coeffs))
    ints = [int(Fraction(c) * den) for c in coeffs]
    a0, an = ints[0], ints[-1]
    cands = {Fraction(0)} if a0 == 0 else set()
    if a0 != 0:
        for p in _divisors(a0):
            for q in _divisors(an):
                cands.add(Fraction(p, q))
                cands.add(Fraction(-p, q))
    return sorted(cands)


@dataclass(frozen=True)
class LinearFactorization:
    unit: Scalar
    roots: tuple[tuple[Scalar, int], ...]
    cofactor: MultiPoly

    def expand(self) -> MultiPoly:
        ring = self.cofactor.ring
        X = ring.gen(0)
        out = self.cofactor.scale(self.unit)
        for a, e in self.roots:
            out = out * (X - ring.const(a)) ** e
        return out


def factor_linear(f: MultiPoly, scan_cap: int = 10**6) -> LinearFactorization:
    """Strip every linear factor of a univariate polynomial.

    Over Q the candidates come from the rational root theorem; over F_p every
    residue is tried. Returns ``unit * prod (X - a)^e * cofactor`` with the
    cofactor monic and root-free in the field.
    """
    F = f.ring.field
    coeffs = _univariate_coeffs(f)
    if f.is_zero():
        raise ZeroPolynomialError("f = 0")
    unit = coeffs[-1]
    coeffs = [F.div(c, unit) for c in coeffs]
    if F.is_finite():
        if F.characteristic > scan_cap:
            raise ScanCapExceeded(f"p = {F.characteristic} exceeds scan cap {scan_cap}")
        candidates = list(F.elements())
    else:
        candidates = _rational_root_candidates(coeffs)
    roots = []
    for a in candidates:
        e = 0
        while len(coeffs) > 1 and _horner(F, coeffs, a) == 0:
            coeffs = _deflate(F, coeffs, a)
            e += 1
        if e:
            roots.append((a, e))
    cof = f.ring.from_terms(((i,), c) for i, c in enumerate(coeffs))
    return LinearFactorization(unit, tuple(roots), cof)
