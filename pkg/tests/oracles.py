"""Independent reference computations used by the tests.

Nothing here calls into the Groebner machinery of the package: membership is
decided by linear algebra on Macaulay matrices, points and roots by brute
force, and reduced bases are cross-checked against sympy.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

P_ORACLE = 32003


def monomials_upto(nvars: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for exps in product(range(degree + 1), repeat=nvars):
        if sum(exps) <= degree:
            out.append(exps)
    return out


def _rank_mod_p(M: np.ndarray, p: int) -> int:
    M = M.copy() % p
    nrows, ncols = M.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = (M[r] * inv) % p
        others = np.nonzero(M[:, c])[0]
        others = others[others != r]
        if others.size:
            M[others] = (M[others] - np.outer(M[others, c], M[r])) % p
        r += 1
    return r


def macaulay_member(
    f: dict, gens: Sequence[dict], nvars: int, p: int = P_ORACLE, max_degree: int = 8
) -> bool:
    """Is ``f`` a combination of ``gens`` with every product m*g of degree at
    most D, for some D <= max_degree?  Polynomials are dicts
    {exponent tuple: int}. A positive answer is a certificate; a negative one
    means no certificate exists up to ``max_degree``."""
    f = {m: c % p for m, c in f.items() if c % p}
    if not f:
        return True
    gens = [{m: c % p for m, c in g.items() if c % p} for g in gens]
    gens = [g for g in gens if g]
    if not gens:
        return False
    deg = lambda q: max(sum(m) for m in q)
    start = max([deg(f)] + [deg(g) for g in gens])
    for D in range(start, max(start, max_degree) + 1):
        cols = monomials_upto(nvars, D)
        index = {m: i for i, m in enumerate(cols)}
        rows = []
        for g in gens:
            for m in monomials_upto(nvars, D - deg(g)):
                row = np.zeros(len(cols), dtype=np.int64)
                for e, c in g.items():
                    row[index[tuple(a + b for a, b in zip(e, m))]] = c
                rows.append(row)
        M = np.array(rows, dtype=np.int64)
        frow = np.zeros(len(cols), dtype=np.int64)
        for e, c in f.items():
            frow[index[e]] = c
        if _rank_mod_p(M, p) == _rank_mod_p(np.vstack([M, frow]), p):
            return True
    return False


def homogeneous_member(f: dict, gens: Sequence[dict], nvars: int, p: int = P_ORACLE) -> bool:
    """Exact membership for homogeneous data: compare in the single degree of f."""
    f = {m: c % p for m, c in f.items() if c % p}
    if not f:
        return True
    D = sum(next(iter(f)))
    cols = [m for m in monomials_upto(nvars, D) if sum(m) == D]
    index = {m: i for i, m in enumerate(cols)}
    rows = []
    for g in gens:
        g = {m: c % p for m, c in g.items() if c % p}
        if not g:
            continue
        d = sum(next(iter(g)))
        if d > D:
            continue
        for m in monomials_upto(nvars, D - d):
            if sum(m) != D - d:
                continue
            row = np.zeros(len(cols), dtype=np.int64)
            for e, c in g.items():
                row[index[tuple(a + b for a, b in zip(e, m))]] = c
            rows.append(row)
    frow = np.zeros(len(cols), dtype=np.int64)
    for e, c in f.items():
        frow[index[e]] = c
    if not rows:
        return False
    M = np.array(rows, dtype=np.int64)
    return _rank_mod_p(M, p) == _rank_mod_p(np.vstack([M, frow]), p)


def brute_force_points(relations: Iterable[dict], nvars: int, p: int) -> list[tuple[int, ...]]:
    """All points of F_p^n where every relation vanishes."""
    rels = list(relations)
    out = []
    for x in product(range(p), repeat=nvars):
        ok = True
        for r in rels:
            total = 0
            for e, c in r.items():
                term = c
                for xi, ei in zip(x, e):
                    term *= xi**ei
                total += term
            if total % p:
                ok = False
                break
        if ok:
            out.append(x)
    return out


def brute_force_roots(coeffs: Sequence[int], p: int) -> dict[int, int]:
    """Roots with multiplicity of sum coeffs[i] X^i over F_p, by repeated
    synthetic division."""
    coeffs = [c % p for c in coeffs]
    roots: dict[int, int] = {}
    for a in range(p):
        while len(coeffs) > 1 and any(coeffs):
            # synthetic division by (X - a), highest degree first
            hi = coeffs[::-1]
            q = [hi[0]]
            for c in hi[1:]:
                q.append((c + q[-1] * a) % p)
            if q[-1] % p:
                break
            roots[a] = roots.get(a, 0) + 1
            coeffs = q[:-1][::-1]
    return roots


def rational_function_equal(num1, den1, num2, den2) -> bool:
    """num1/den1 == num2/den2 for sympy expressions, by cross-multiplying."""
    import sympy

    return sympy.cancel(sympy.together(num1 * den2 - num2 * den1)) == 0


def sympy_reduced_basis(polys: Sequence[str], names: Sequence[str], order: str, modulus: int | None = None):
    """Reduced Groebner basis from sympy as a set of normalized strings."""
    import sympy

    syms = sympy.symbols(list(names))
    kw = {"modulus": modulus} if modulus else {"domain": "QQ"}
    G = sympy.groebner([sympy.sympify(p.replace("^", "**")) for p in polys], *syms, order=order, **kw)
    return [sympy.Poly(g, *syms, **kw) for g in G.exprs]


def fraction_coeffs(d: dict) -> dict:
    return {m: Fraction(c) for m, c in d.items()}
