"""JSON wire formats.

Polynomial::

    {"field": "Q" | "Fp:<p>", "vars": ["X", "Y"],
     "terms": [{"coeff": "<int>/<int>" | "<int>", "exps": [e0, e1]}]}

Terms are emitted in descending grevlex order. Other documents (algebras,
fractions, factored units) nest this encoding.
"""

from __future__ import annotations

from typing import Any, Optional, Sequence

from .fpalg import FPAlgebra
from .polyfield.field import Field, field_from_spec
from .polyfield.laurent import LaurentFraction
from .polyfield.parse import identifiers, parse_poly
from .polyfield.poly import MultiPoly, PolyRing, RingMismatch


class WireFormatError(ValueError):
    pass


def poly_to_json(p: MultiPoly) -> dict:
    F = p.ring.field
    return {
        "field": F.spec,
        "vars": list(p.ring.names),
        "terms": [{"coeff": F.format(c), "exps": list(m)} for m, c in p.terms()],
    }


def is_poly_json(obj: Any) -> bool:
    return isinstance(obj, dict) and "terms" in obj and "vars" in obj


def poly_from_json(obj: dict, ring: Optional[PolyRing] = None, laurent: bool = False) -> MultiPoly:
    if not is_poly_json(obj):
        raise WireFormatError(f"not a polynomial document: {obj!r}")
    F = field_from_spec(obj.get("field", "Q"))
    names = tuple(obj["vars"])
    if ring is None:
        ring = PolyRing(F, names, frozenset(range(len(names))) if laurent else frozenset())
    elif ring.field != F:
        raise RingMismatch(f"polynomial over {F.spec}, expected {ring.field.spec}")
    terms = []
    for t in obj["terms"]:
        exps = list(t["exps"])
        if len(exps) != len(names):
            raise WireFormatError(f"term {t} does not match variables {list(names)}")
        terms.append((exps, F.parse(str(t["coeff"]))))
    if names == ring.names:
        return ring.from_terms(terms)
    # relabel into the requested ring by name
    pos = [ring.index(nm) for nm in names]
    src = PolyRing(F, names, frozenset(i for i, nm in enumerate(names) if ring.index(nm) in ring.laurent))
    return src.from_terms(terms).embed(ring, pos)


def collect_names(values: Sequence[Any]) -> tuple[Optional[Field], list[str]]:
    """Field and variable names implied by a list of raw values (JSON
    polynomials or infix strings)."""
    field_ = None
    names: list[str] = []
    for v in values:
        if is_poly_json(v):
            F = field_from_spec(v.get("field", "Q"))
            if field_ is not None and F != field_:
                raise RingMismatch("polynomials over different fields")
            field_ = F
            for nm in v["vars"]:
                if nm not in names:
                    names.append(nm)
        elif isinstance(v, str):
            for nm in identifiers(v):
                if nm not in names:
                    names.append(nm)
        elif isinstance(v, (int,)):
            continue
        else:
            raise WireFormatError(f"expected a polynomial, got {v!r}")
    return field_, names


def to_poly(value: Any, ring: PolyRing, allow_infix: bool = True) -> MultiPoly:
    """JSON polynomial, integer constant, or (flags only) an infix string."""
    if is_poly_json(value):
        return poly_from_json(value, ring)
    if isinstance(value, str):
        if not allow_infix:
            raise WireFormatError(f"infix polynomial {value!r} not allowed in files; use the JSON encoding")
        return parse_poly(value, ring)
    if isinstance(value, int):
        return ring.const(value)
    raise WireFormatError(f"expected a polynomial, got {value!r}")


# -- fractions ------------------------------------------------------------


def fraction_to_json(fr: LaurentFraction) -> dict:
    return {
        "num": [poly_to_json(m) for m in fr.num],
        "base": poly_to_json(fr.base),
        "exp": fr.exp,
        "text": str(fr),
    }


def fraction_from_json(obj: Any, ring: PolyRing, base: MultiPoly, allow_infix: bool = True) -> LaurentFraction:
    """``{"num": poly | [poly...], "exp": k}`` (base given by context) or a bare
    polynomial meaning exponent 0."""
    if isinstance(obj, dict) and "num" in obj:
        num = obj["num"]
        nums = num if isinstance(num, list) else [num]
        exp = int(obj.get("exp", 0))
        if "base" in obj:
            given = to_poly(obj["base"], ring, allow_infix)
            if given != base:
                raise WireFormatError(f"fraction base {given} does not match expected {base}")
        return LaurentFraction(tuple(to_poly(m, ring, allow_infix) for m in nums), base, exp)
    return LaurentFraction((to_poly(obj, ring, allow_infix),), base, 0)


# -- algebras -------------------------------------------------------------


def algebra_to_json(A: FPAlgebra) -> dict:
    return {
        "field": A.field.spec,
        "n": A.n,
        "names": list(A.names),
        "relations": [poly_to_json(q) for q in A.relations],
    }


def algebra_from_json(
    obj: dict, field_: Optional[Field] = None, allow_infix: bool = False, override: Optional[Field] = None
) -> FPAlgebra:
    """``override`` re-reads the relations over another field (coefficients
    are reduced), e.g. to count points of a rational presentation mod p."""
    if not isinstance(obj, dict) or "n" not in obj:
        raise WireFormatError("algebra document needs 'n'")
    n = int(obj["n"])
    names = obj.get("names") or [f"x{i + 1}" for i in range(n)]
    if len(names) != n:
        raise WireFormatError(f"{len(names)} names for n = {n}")
    F = field_from_spec(obj["field"]) if "field" in obj else field_
    rels_raw = obj.get("relations", [])
    if F is None:
        F_rel, _ = collect_names([r for r in rels_raw if is_poly_json(r)])
        F = F_rel or field_from_spec("Q")
    if override is not None and override != F:
        rels_raw = [_refield(r, override) if is_poly_json(r) else r for r in rels_raw]
        F = override
    ring = PolyRing(F, tuple(names))
    rels = [to_poly(r, ring, allow_infix) for r in rels_raw]
    return FPAlgebra(ring, rels)


def _refield(obj: dict, F: Field) -> dict:
    terms = [{"coeff": F.format(F.parse(str(t["coeff"]))), "exps": t["exps"]} for t in obj["terms"]]
    return {"field": F.spec, "vars": obj["vars"], "terms": terms}


def pair_key(text: str) -> tuple[int, int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise WireFormatError(f"pair key must look like 'i,j', got {text!r}") from None
    return i, j
