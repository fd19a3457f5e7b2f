"""Batch command-line front end.

Every command prints one report (JSON by default) and exits with 0 on
success or a true answer, 1 on a false answer, 2 on a usage error and 3 when
the computation itself fails.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from . import cech, cover, fpalg, groebner, proj
from .config import Config, ConfigError, load_config
from .io import (
    WireFormatError,
    algebra_from_json,
    algebra_to_json,
    collect_names,
    fraction_from_json,
    fraction_to_json,
    is_poly_json,
    pair_key,
    poly_to_json,
    to_poly,
)
from .linalg import Matrix
from .polyfield.field import Field, FieldError, field_from_spec
from .polyfield.laurent import LaurentFraction
from .polyfield.parse import ParseError
from .polyfield.poly import MultiPoly, PolyRing, RingMismatch, ZeroPolynomialError, factor_linear

SCHEMA = "1"
EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        if message:
            sys.stderr.write(message)
        raise _Exit(status)


class _Exit(Exception):
    def __init__(self, status):
        self.status = status


@dataclass
class Outcome:
    result: dict
    verification: list[tuple[str, bool]] = field(default_factory=list)
    truth: Optional[bool] = None  # decision commands
    text: Optional[str] = None


# ---------------------------------------------------------------------------
# argument helpers


class Ctx:
    """Parsed arguments, the effective config, and a record of every loaded
    input (for the report digest)."""

    def __init__(self, args: argparse.Namespace, cfg: Config, explicit_field: bool):
        self.args = args
        self.cfg = cfg
        self.explicit_field = explicit_field
        self.inputs: dict[str, Any] = {}

    @property
    def F(self) -> Field:
        return self.cfg.field_obj

    def raw(self, flag: str, default: Any = None) -> tuple[Any, bool]:
        """Flag value as (value, from_file). ``@path`` reads a JSON file;
        otherwise JSON is tried and anything else stays a string."""
        text = getattr(self.args, flag.lstrip("-").replace("-", "_"), None)
        if text is None:
            if default is None:
                raise UsageError(f"missing required flag {flag}")
            self.inputs[flag] = default
            return default, False
        if not isinstance(text, str):
            self.inputs[flag] = text
            return text, False
        if text.startswith("@"):
            value = _read_json(text[1:], flag)
            self.inputs[flag] = value
            return value, True
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        self.inputs[flag] = value
        return value, False

    def poly_list(self, flag: str, default: Any = None) -> tuple[list, bool]:
        value, from_file = self.raw(flag, default)
        if isinstance(value, str):
            value = _split_list(value)
        elif is_poly_json(value) or isinstance(value, int):
            value = [value]
        if not isinstance(value, list):
            raise UsageError(f"{flag}: expected a list of polynomials")
        return value, from_file

    def document(self, flag: str) -> tuple[dict, bool]:
        """A JSON document given inline, as ``@path`` or as a bare path."""
        text = getattr(self.args, flag.lstrip("-").replace("-", "_"), None)
        if text is None:
            raise UsageError(f"missing required flag {flag}")
        if text.startswith("@"):
            text = text[1:]
        elif text.lstrip().startswith("{"):
            try:
                value = json.loads(text)
            except json.JSONDecodeError as e:
                raise UsageError(f"{flag}: invalid JSON: {e}") from None
            self.inputs[flag] = value
            return value, False
        value = _read_json(text, flag)
        if not isinstance(value, dict):
            raise UsageError(f"{flag}: expected a JSON object")
        self.inputs[flag] = value
        return value, True

    def ring_for(self, values: Sequence[Any], laurent: bool = False, doc: Optional[dict] = None) -> PolyRing:
        """Common ring for raw polynomial values: fields and variable names
        come from JSON polynomials, then ``--vars``, then infix identifiers."""
        F_json, names = collect_names(values)
        if doc is not None and "vars" in doc:
            names = list(doc["vars"])
        explicit = getattr(self.args, "vars", None)
        if explicit:
            order = [v.strip() for v in explicit.split(",") if v.strip()]
            missing = [nm for nm in names if nm not in order]
            if missing:
                raise UsageError(f"--vars: variables {missing} used but not listed")
            names = order
        if doc is not None and "field" in doc:
            F = field_from_spec(doc["field"])
        else:
            F = F_json or self.F
        lset = frozenset(range(len(names))) if laurent else frozenset()
        return PolyRing(F, tuple(names), lset)

    def algebra(self, flag: str, override: Optional[Field] = None) -> fpalg.FPAlgebra:
        doc, from_file = self.document(flag)
        try:
            return algebra_from_json(doc, self.F, allow_infix=not from_file, override=override)
        except KeyError as e:
            raise WireFormatError(f"{flag}: missing key {e}") from None


def _read_json(path: str, flag: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"{flag}: cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{flag}: {path} is not valid JSON: {e}") from None


def _split_list(text: str) -> list[str]:
    """``[a, b*(c+d), e]`` -> items split on top-level commas."""
    t = text.strip()
    if t.startswith("[") and t.endswith("]"):
        t = t[1:-1]
    items, depth, cur = [], 0, []
    for ch in t:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            items.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    last = "".join(cur).strip()
    if last or items:
        items.append(last)
    if any(not it for it in items):
        raise UsageError(f"empty entry in polynomial list {text!r}")
    return items


def _polys(values: Sequence[Any], ring: PolyRing, from_file: bool, flag: str = "") -> list[MultiPoly]:
    try:
        return [to_poly(v, ring, allow_infix=not from_file) for v in values]
    except (ParseError, WireFormatError) as e:
        raise UsageError(f"{flag}: {e}" if flag else str(e)) from None


def _scalar(F: Field, value: Any):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise WireFormatError(f"expected a scalar, got {value!r}")
    return F.parse(str(value))


def _fmt_polys(ps: Sequence[MultiPoly]) -> dict:
    return {"json": [poly_to_json(p) for p in ps], "text": [str(p) for p in ps]}


def _kdim(value) -> Any:
    return value if isinstance(value, int) else groebner.INFINITE


# ---------------------------------------------------------------------------
# groebner commands


def _ideal_and(ctx: Ctx, *poly_flags: str) -> tuple[PolyRing, groebner.Ideal, list]:
    ideal_raw, ideal_file = ctx.poly_list("--ideal", [])
    others = []
    for fl in poly_flags:
        if fl.endswith("s"):
            others.append((fl, *ctx.poly_list(fl)))
        else:
            v, ff = ctx.raw(fl)
            others.append((fl, [v], ff))
    ring = ctx.ring_for(ideal_raw + [v for _, vs, _ in others for v in vs])
    ideal = groebner.Ideal(ring, _polys(ideal_raw, ring, ideal_file, "--ideal"))
    return ring, ideal, [_polys(vs, ring, ff, fl) for fl, vs, ff in others]


def cmd_gb(ctx: Ctx) -> Outcome:
    ring, I, _ = _ideal_and(ctx)
    order = ctx.cfg.term_order
    G = I.basis(order)
    res = {"order": str(order), "basis": _fmt_polys(G), "vars": list(ring.names)}
    return Outcome(res, [("basis passes the Buchberger criterion and generates the input ideal", I.check_basis(order))])


def cmd_member(ctx: Ctx) -> Outcome:
    _, I, [[f]] = _ideal_and(ctx, "--f")
    ans = groebner.membership(f, I, ctx.cfg.term_order)
    return Outcome({"member": ans, "order": ctx.cfg.order}, truth=ans)


def cmd_radical_member(ctx: Ctx) -> Outcome:
    _, I, [[f]] = _ideal_and(ctx, "--f")
    ans = groebner.radical_membership(f, I)
    return Outcome({"member": ans}, truth=ans)


def cmd_unimodular(ctx: Ctx) -> Outcome:
    ring, I, [fs] = _ideal_and(ctx, "--fs")
    w = groebner.unimodular_witness(fs, I)
    if w is None:
        return Outcome({"unimodular": False}, truth=False)
    total = sum((r * f for r, f in zip(w, fs)), ring.zero)
    ok = I.contains(total - ring.one)
    return Outcome({"unimodular": True, "witness": _fmt_polys(w)}, [("sum r_i f_i = 1 modulo the ideal", ok)], truth=True)


def cmd_kdim(ctx: Ctx) -> Outcome:
    _, I, _ = _ideal_and(ctx)
    return Outcome({"kdim": _kdim(groebner.k_dimension(I))})


def cmd_regular(ctx: Ctx) -> Outcome:
    _, I, [[f]] = _ideal_and(ctx, "--f")
    ans = groebner.is_regular(f, I)
    return Outcome({"regular": ans}, truth=ans)


def cmd_saturate(ctx: Ctx) -> Outcome:
    _, I, [[f]] = _ideal_and(ctx, "--f")
    S = I.saturate(f)
    return Outcome({"saturation": _fmt_polys(S.basis())})


def cmd_factor(ctx: Ctx) -> Outcome:
    v, ff = ctx.raw("--f")
    ring = ctx.ring_for([v])
    f = to_poly(v, ring, not ff)
    try:
        fac = factor_linear(f, ctx.cfg.cap)
    except ZeroPolynomialError:
        return Outcome({"zero": True})
    F = ring.field
    res = {
        "zero": False,
        "unit": F.format(fac.unit),
        "roots": [[F.format(a), e] for a, e in fac.roots],
        "cofactor": _fmt_polys([fac.cofactor]),
    }
    return Outcome(res, [("unit * prod (X - a)^e * cofactor = f", fac.expand() == f)])


# ---------------------------------------------------------------------------
# fpalg commands


def _emit_algebra(ctx: Ctx, A: fpalg.FPAlgebra, extra: Optional[dict] = None) -> dict:
    doc = algebra_to_json(A)
    out = getattr(ctx.args, "out", None)
    if out:
        Path(out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    res = {"algebra": doc, "relations_text": [str(q) for q in A.relations]}
    res.update(extra or {})
    return res


def cmd_algebra_new(ctx: Ctx) -> Outcome:
    names = [s.strip() for s in (ctx.args.names or "").split(",") if s.strip()]
    rels_raw, ff = ctx.poly_list("--relations", [])
    ctx.inputs["--names"] = names
    _, used = collect_names(rels_raw)
    unknown = [nm for nm in used if nm not in names]
    if unknown:
        raise UsageError(f"--relations: unknown variables {unknown} (declare them with --names)")
    F_json, _ = collect_names(rels_raw)
    ring = PolyRing(F_json or ctx.F, tuple(names))
    A = fpalg.FPAlgebra(ring, _polys(rels_raw, ring, ff))
    return Outcome(_emit_algebra(ctx, A))


def cmd_algebra_show(ctx: Ctx) -> Outcome:
    A = ctx.algebra("--algebra")
    return Outcome(_emit_algebra(ctx, A, {"trivial": A.is_trivial(), "kdim": _kdim(A.k_dimension())}))


def cmd_hom(ctx: Ctx) -> Outcome:
    A, B = ctx.algebra("--source"), ctx.algebra("--target")
    ims_raw, ff = ctx.poly_list("--images")
    ims = _polys(ims_raw, B.ring, ff)
    try:
        h = fpalg.hom(A, B, ims)
    except fpalg.WellDefinednessFailure as e:
        res = {"valid": False, "relation": str(e.relation), "image": str(e.image)}
        return Outcome(res, truth=False)
    return Outcome({"valid": True, "images": _fmt_polys(h.images)}, truth=True)


def cmd_tensor(ctx: Ctx) -> Outcome:
    A, B = ctx.algebra("--a"), ctx.algebra("--b")
    over = None
    if ctx.args.over:
        C = ctx.algebra("--over")
        f_raw, f_ff = ctx.poly_list("--f")
        g_raw, g_ff = ctx.poly_list("--g")
        over = (C, fpalg.hom(C, A, _polys(f_raw, A.ring, f_ff)), fpalg.hom(C, B, _polys(g_raw, B.ring, g_ff)))
    AB, _, _ = fpalg.tensor(A, B, over)
    return Outcome(_emit_algebra(ctx, AB, {"kdim": _kdim(AB.k_dimension())}))


def cmd_localize(ctx: Ctx) -> Outcome:
    A = ctx.algebra("--a")
    v, ff = ctx.raw("--f")
    Af, _ = fpalg.localize(A, to_poly(v, A.ring, not ff))
    return Outcome(_emit_algebra(ctx, Af, {"trivial": Af.is_trivial()}))


def cmd_spec_points(ctx: Ctx) -> Outcome:
    A = ctx.algebra("--a", override=ctx.F if ctx.explicit_field else None)
    pts = fpalg.spec_points(A, ctx.cfg.cap, ctx.cfg.jobs)
    F = A.field
    coords = [[F.format(x) for x in p.coords] for p in pts]
    ok = all(p.lies_on(A) for p in pts)
    return Outcome({"field": F.spec, "count": len(pts), "points": coords}, [("every point satisfies the relations", ok)])


def cmd_sqc_roundtrip(ctx: Ctx) -> Outcome:
    xi_alg = ctx.algebra("--xi")
    F = xi_alg.field
    xi = xi_alg.presentation
    stage = ctx.algebra("--stage") if ctx.args.stage else fpalg.FPAlgebra(PolyRing(F, ()))
    if ctx.args.family:
        family = []
        for i, path in enumerate(ctx.args.family):
            doc = _read_json(path, "--family")
            ctx.inputs[f"--family[{i}]"] = doc
            family.append(algebra_from_json(doc, F))
    else:
        family = [fpalg.FPAlgebra(PolyRing(F, ())), fpalg.FPAlgebra.of(F, ["t"], ["t^2"])]
    rep = fpalg.sqc_roundtrip(xi, stage, family, ctx.cfg.cap, ctx.args.max_degree)
    res = {
        "elements": rep.elements,
        "indices": rep.indices,
        "truncated": rep.truncated,
        "checks": [{"name": c.name, "passed": c.passed, "count": c.count} for c in rep.checks],
    }
    return Outcome(res, [(c.name, c.passed) for c in rep.checks], truth=rep.ok)


# ---------------------------------------------------------------------------
# cover commands


def _two_sets(ctx: Ctx):
    amb_raw, amb_ff = ctx.poly_list("--ideal", [])
    f_raw, f_ff = ctx.poly_list("--f")
    g_raw, g_ff = ctx.poly_list("--g")
    ring = ctx.ring_for(amb_raw + f_raw + g_raw)
    A = fpalg.FPAlgebra(ring, _polys(amb_raw, ring, amb_ff, "--ideal"))
    return A, _polys(f_raw, ring, f_ff, "--f"), _polys(g_raw, ring, g_ff, "--g")


def cmd_open_contained(ctx: Ctx) -> Outcome:
    A, fs, gs = _two_sets(ctx)
    ans = cover.open_contained(cover.StandardOpen(A, fs), cover.StandardOpen(A, gs))
    return Outcome({"contained": ans}, truth=ans)


def cmd_closed_contained(ctx: Ctx) -> Outcome:
    A, fs, gs = _two_sets(ctx)
    ans = cover.closed_contained(cover.ClosedSet(A, fs), cover.ClosedSet(A, gs))
    return Outcome({"contained": ans}, truth=ans)


def _fraction_polys(fr: Any) -> list:
    if isinstance(fr, dict) and "num" in fr:
        num = fr["num"] if isinstance(fr["num"], list) else [fr["num"]]
        return num + ([fr["base"]] if "base" in fr else [])
    return [fr]


def _ambient_doc(ctx: Ctx, doc: dict, ff: bool, extra_values: list) -> tuple[PolyRing, fpalg.FPAlgebra]:
    amb = doc.get("ambient", [])
    ring = ctx.ring_for(amb + extra_values, doc=doc)
    return ring, fpalg.FPAlgebra(ring, _polys(amb, ring, ff))


def cmd_patch_ideals(ctx: Ctx) -> Outcome:
    doc, ff = ctx.document("--family")
    try:
        cov_raw, locals_raw = doc["cover"], doc["locals"]
    except KeyError as e:
        raise WireFormatError(f"family document needs key {e}") from None
    values = list(cov_raw) + [p for gs in locals_raw for fr in gs for p in _fraction_polys(fr)]
    ring, A = _ambient_doc(ctx, doc, ff, values)
    fs = _polys(cov_raw, ring, ff)
    locs = [[fraction_from_json(fr, ring, f, not ff) for fr in gs] for f, gs in zip(fs, locals_raw)]
    fam = cover.LocalIdealFamily(A, fs, locs)
    pr = cover.patch_ideals(fam, ctx.cfg.sat_bound)
    exps = [{"i": i, "k": k, "j": j, "l": l} for (i, k, j), l in sorted(pr.exponents.items())]
    return Outcome({"ideal": _fmt_polys(pr.ideal.gens), "exponents": exps}, pr.transcript)


def _unit_from_json(F: Field, obj: Any) -> cover.FactoredUnit:
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        return cover.FactoredUnit.constant(F, _scalar(F, obj))
    if not isinstance(obj, dict):
        raise WireFormatError(f"factored unit expected, got {obj!r}")
    exps = []
    for pair in obj.get("exps", []):
        if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[1], int)):
            raise WireFormatError(f"factor must be [root, exponent], got {pair!r}")
        exps.append((_scalar(F, pair[0]), pair[1]))
    return cover.FactoredUnit(F, _scalar(F, obj.get("unit", 1)), tuple(exps))


def _unit_to_json(u: cover.FactoredUnit) -> dict:
    F = u.field
    return {"unit": F.format(u.unit), "exps": [[F.format(a), e] for a, e in u.exps], "text": str(u)}


def _roots(ctx: Ctx, flag: str, F: Field) -> list:
    value, _ = ctx.raw(flag, [])
    if isinstance(value, str):
        value = _split_list(value)
    if not isinstance(value, list):
        raise UsageError(f"{flag}: expected a list of roots")
    return [_scalar(F, a) for a in value]


def cmd_split_unit(ctx: Ctx) -> Outcome:
    F = ctx.F
    shared, u_only, v_only = (_roots(ctx, fl, F) for fl in ("--shared", "--u-only", "--v-only"))
    f_raw, _ = ctx.raw("--f")
    f = _unit_from_json(F, f_raw)
    g, h = cover.decompose_unit_on_intersection(shared, u_only, v_only, f)
    ok = cover.same_rational_function(g * h, f, PolyRing(F, ("X",)))
    return Outcome({"g": _unit_to_json(g), "h": _unit_to_json(h)}, [("g * h = f", ok)])


def cmd_merge_sections(ctx: Ctx) -> Outcome:
    doc, _ = ctx.document("--data")
    F = field_from_spec(doc["field"]) if "field" in doc else ctx.F
    comps = [[_scalar(F, a) for a in c] for c in doc.get("complements", [])]
    trans = {pair_key(k): _unit_from_json(F, v) for k, v in sorted(doc.get("transitions", {}).items())}
    mr = cover.merge_sections(comps, trans, F)
    return Outcome({"gauges": [_unit_to_json(t) for t in mr.gauges], "steps": mr.steps}, mr.transcript)


def cmd_trivialize_cocycle(ctx: Ctx) -> Outcome:
    doc, _ = ctx.document("--data")
    F = field_from_spec(doc["field"]) if "field" in doc else ctx.F
    raw_vals = doc.get("values", {})
    values = {}
    for k, v in raw_vals.items():
        vec = v if isinstance(v, list) else [v]
        values[pair_key(k)] = [_scalar(F, x) for x in vec]
    indices = doc.get("indices") or sorted({i for key in values for i in key})
    c = cover.PointedCocycle(F, indices, values, doc.get("base"), doc.get("rank"))
    u = cover.trivialize_pointed_cocycle(c)
    checks = []
    for i in c.indices:
        for j in c.indices:
            diff = tuple(F.sub(a, b) for a, b in zip(u[i], u[j]))
            checks.append((f"u_{i} - u_{j} = c_{i}{j}", diff == c.values[(i, j)]))
    ok = all(p for _, p in checks)
    res = {"base": c.base, "u": {str(i): [F.format(x) for x in u[i]] for i in c.indices}}
    return Outcome(res, [(f"u_i - u_j = c_ij for all {len(checks)} pairs", ok)])


def cmd_split_cocycle(ctx: Ctx) -> Outcome:
    doc, ff = ctx.document("--data")
    try:
        cov_raw, s_raw = doc["cover"], doc["s"]
    except KeyError as e:
        raise WireFormatError(f"cocycle document needs key {e}") from None
    wit_raw = doc.get("witness")
    values = list(cov_raw) + list(wit_raw or []) + [p for fr in s_raw.values() for p in _fraction_polys(fr)]
    ring, A = _ambient_doc(ctx, doc, ff, values)
    fs = _polys(cov_raw, ring, ff)
    s = {}
    for key, fr in sorted(s_raw.items()):
        i, j = pair_key(key)
        s[(i, j)] = fraction_from_json(fr, ring, fs[min(i, j)] * fs[max(i, j)], not ff)
    rank = int(doc.get("rank", 1))
    wit = tuple(_polys(wit_raw, ring, ff)) if wit_raw else None
    z = cech.CoprimeSystemCocycle(A.ideal, fs, s, rank, wit)
    sr = cech.split_h1(z, ctx.cfg.sat_bound)
    res = {
        "u": [fraction_to_json(u) for u in sr.u],
        "u_text": [str(u) for u in sr.u],
        "exponent": sr.exponent,
        "witness": _fmt_polys(sr.witness),
    }
    return Outcome(res, sr.transcript)


def cmd_cech_dims(ctx: Ctx) -> Outcome:
    doc, _ = ctx.document("--data")
    F = field_from_spec(doc["field"]) if "field" in doc else ctx.F
    spaces = doc.get("spaces")
    mats = []
    for k, rows in enumerate(doc.get("matrices", [])):
        ncols = spaces[k] if spaces else None
        if not rows and ncols is None:
            raise WireFormatError(f"matrix {k} has no rows; give 'spaces'")
        mats.append(Matrix.from_rows(F, [[_scalar(F, x) for x in r] for r in rows], ncols))
    dims = cech.cohomology_dims(mats, spaces)
    return Outcome({"dims": dims}, [("d^(k+1) d^k = 0 for all k", True)])


# ---------------------------------------------------------------------------
# proj commands


def _table_range(text: str) -> range:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise UsageError(f"--table: expected dmin..dmax, got {text!r}") from None
    if lo > hi:
        raise UsageError("--table: dmin exceeds dmax")
    return range(lo, hi + 1)


def cmd_pn_cohomology(ctx: Ctx) -> Outcome:
    n = ctx.args.n
    margin = ctx.cfg.margin
    if ctx.args.table:
        ds = list(_table_range(ctx.args.table))
    elif ctx.args.d is not None:
        ds = [ctx.args.d]
    else:
        raise UsageError("--d or --table is required")
    rows = []
    for d in ds:
        spec = proj.TwistSpec(n, d, ctx.F)
        dims = proj.cohomology_Pn(spec, margin)
        oracle = proj.closed_form_dims(spec)
        rows.append({"n": n, "d": d, "dims": dims, "oracle": oracle, "match": dims == oracle})
    checks = [(f"window stable at margin {margin} vs {margin + 1}", True)]
    checks += [(f"d = {r['d']}: matches C(n+d, n) / C(-d-1, n)", r["match"]) for r in rows]
    ok = all(r["match"] for r in rows)
    header = "d".rjust(4) + "".join(f"  h^{q}".rjust(8) for q in range(n + 1)) + "  match"
    lines = [f"P^{n}", header]
    for r in rows:
        lines.append(str(r["d"]).rjust(4) + "".join(str(x).rjust(8) for x in r["dims"]) + ("  yes" if r["match"] else "  NO"))
    res = rows[0] if len(rows) == 1 else {"n": n, "table": rows, "match": ok}
    return Outcome(res, checks, truth=ok, text="\n".join(lines))


def cmd_classify_unit(ctx: Ctx) -> Outcome:
    v, ff = ctx.raw("--g")
    ring = ctx.ring_for([v], laurent=True)
    if ring.nvars != 1:
        raise proj.NotAUnit(f"Laurent polynomial in one variable expected, got variables {list(ring.names)}")
    g = to_poly(v, ring, not ff)
    try:
        alpha, k = proj.classify_unit(g)
    except proj.NotAUnit as e:
        return Outcome({"unit": False, "reason": str(e)}, truth=False)
    res = {"unit": True, "alpha": ring.field.format(alpha), "exponent": k, "degree": -k}
    return Outcome(res, truth=True)


def cmd_twist(ctx: Ctx) -> Outcome:
    ds = [ctx.args.d] + list(ctx.args.tensor or [])
    glues = [proj.twist_glue(d, ctx.F) for d in ds]
    total = glues[0]
    for g in glues[1:]:
        total = proj.tensor_glue(total, g)
    deg = proj.bundle_degree(total)
    res = {"twists": ds, "glue": str(total), "degree": deg}
    return Outcome(res, [("degree is additive under tensor", deg == sum(ds))])


# ---------------------------------------------------------------------------
# corpus


def _canon(x: Any) -> str:
    return json.dumps(x, sort_keys=True, separators=(",", ":"))


def _subset_match(expected: Any, actual: Any) -> bool:
    """Expected dicts list the keys that must match; extra keys in the
    actual result are ignored. Everything else compares canonically."""
    if isinstance(expected, dict) and isinstance(actual, dict):
        return all(k in actual and _subset_match(v, actual[k]) for k, v in expected.items())
    if isinstance(expected, list) and isinstance(actual, list):
        return len(expected) == len(actual) and all(map(_subset_match, expected, actual))
    return _canon(expected) == _canon(actual)


@contextlib.contextmanager
def _cwd(path: Path):
    old = os.getcwd()
    os.chdir(path)
    try:
        yield
    finally:
        os.chdir(old)


def run_corpus(directory: Path) -> dict:
    cases = sorted(directory.glob("*.input.json"))
    failures = []
    passed = 0
    for inp in cases:
        name = inp.name[: -len(".input.json")]
        exp_path = inp.with_name(name + ".expected.json")
        try:
            case = json.loads(inp.read_text())
            expected = json.loads(exp_path.read_text())
            argv = case["argv"]
            if not isinstance(argv, list) or not all(isinstance(a, str) for a in argv):
                raise ValueError("argv must be a list of strings")
        except (OSError, ValueError, KeyError, TypeError) as e:
            failures.append({"case": name, "reason": f"malformed case: {e}"})
            continue
        with _cwd(directory):
            code, report = run(argv, environ={})
        want_exit = expected.get("exit", 0)
        if code != want_exit:
            failures.append({"case": name, "reason": f"exit {code}, expected {want_exit}"})
        elif "result" in expected and not _subset_match(expected["result"], (report or {}).get("result")):
            failures.append({"case": name, "reason": "result differs from expectation"})
        else:
            passed += 1
    return {"total": len(cases), "passed": passed, "failed": failures}


def cmd_corpus(ctx: Ctx) -> Outcome:
    d = Path(ctx.args.directory)
    if not d.is_dir():
        raise UsageError(f"corpus: {d} is not a directory")
    summary = run_corpus(d)
    ok = not summary["failed"]
    lines = [f"{summary['passed']}/{summary['total']} cases passed"]
    lines += [f"FAIL {f['case']}: {f['reason']}" for f in summary["failed"]]
    return Outcome(summary, truth=ok, text="\n".join(lines))


# ---------------------------------------------------------------------------
# parser and driver


COMMANDS: dict[str, Callable[[Ctx], Outcome]] = {
    "gb": cmd_gb,
    "member": cmd_member,
    "radical-member": cmd_radical_member,
    "unimodular": cmd_unimodular,
    "kdim": cmd_kdim,
    "regular": cmd_regular,
    "saturate": cmd_saturate,
    "factor": cmd_factor,
    "algebra new": cmd_algebra_new,
    "algebra show": cmd_algebra_show,
    "hom": cmd_hom,
    "tensor": cmd_tensor,
    "localize": cmd_localize,
    "spec-points": cmd_spec_points,
    "sqc-roundtrip": cmd_sqc_roundtrip,
    "open-contained": cmd_open_contained,
    "closed-contained": cmd_closed_contained,
    "patch-ideals": cmd_patch_ideals,
    "split-unit": cmd_split_unit,
    "merge-sections": cmd_merge_sections,
    "trivialize-cocycle": cmd_trivialize_cocycle,
    "split-cocycle": cmd_split_cocycle,
    "cech-dims": cmd_cech_dims,
    "pn-cohomology": cmd_pn_cohomology,
    "classify-unit": cmd_classify_unit,
    "twist": cmd_twist,
    "corpus": cmd_corpus,
}

CONFIG_FLAGS = ("field", "order", "cap", "sat_bound", "margin", "jobs", "format")


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("configuration")
    g.add_argument("--config", help="JSON config file")
    g.add_argument("--field", help='"Q" or "Fp:<prime>"')
    g.add_argument("--order", help="grevlex, lex or block:<k>")
    g.add_argument("--cap", type=int, help="enumeration cap")
    g.add_argument("--sat-bound", type=int, help="exponent search bound")
    g.add_argument("--margin", type=int, help="multidegree window margin")
    g.add_argument("--jobs", type=int, help="worker processes")
    g.add_argument("--format", choices=("json", "text"))
    g.add_argument("--vars", help="comma-separated variable order")
    g.add_argument("--timing", action="store_true", help="add wall time to the report")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="zariski", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("gb", "reduced Groebner basis")
    p.add_argument("--ideal", required=True)
    for name, help_ in (
        ("member", "ideal membership"),
        ("radical-member", "membership in the radical"),
        ("regular", "is f a non-zero-divisor modulo the ideal"),
        ("saturate", "saturation (I : f^inf)"),
    ):
        p = add(name, help_)
        p.add_argument("--f", required=True)
        p.add_argument("--ideal", default=None)
    p = add("unimodular", "do the fs generate the unit ideal modulo the ideal")
    p.add_argument("--fs", required=True)
    p.add_argument("--ideal")
    p = add("kdim", "dimension of k[x]/I as a vector space")
    p.add_argument("--ideal", required=True)
    p = add("factor", "linear factors of a univariate polynomial")
    p.add_argument("--f", required=True)

    alg = sub.add_parser("algebra", help="finitely presented algebra documents")
    alg_sub = alg.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    alg_sub.required = True
    p = alg_sub.add_parser("new", parents=[common], help="create an algebra document")
    p.add_argument("--names", required=True)
    p.add_argument("--relations")
    p.add_argument("--out")
    p = alg_sub.add_parser("show", parents=[common], help="summarize an algebra document")
    p.add_argument("algebra")
    p.add_argument("--out")

    p = add("hom", "check a homomorphism given by generator images")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--images", required=True)
    p = add("tensor", "tensor product, optionally over a third algebra")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--over")
    p.add_argument("--f", help="images of the base generators in A")
    p.add_argument("--g", help="images of the base generators in B")
    p.add_argument("--out")
    p = add("localize", "localization A_f")
    p.add_argument("--a", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--out")
    p = add("spec-points", "rational points over a prime field")
    p.add_argument("--a", required=True)
    p = add("sqc-roundtrip", "external phi/psi roundtrip check")
    p.add_argument("--xi", required=True)
    p.add_argument("--stage")
    p.add_argument("--family", nargs="+")
    p.add_argument("--max-degree", type=int, default=2)

    for name, help_ in (("open-contained", "D(f..) inside D(g..)"), ("closed-contained", "V(f..) inside V(g..)")):
        p = add(name, help_)
        p.add_argument("--f", required=True)
        p.add_argument("--g", required=True)
        p.add_argument("--ideal")
    p = add("patch-ideals", "glue local ideals on a unimodular cover")
    p.add_argument("--family", required=True)
    p = add("split-unit", "factor a unit on an overlap of two opens of the line")
    p.add_argument("--shared")
    p.add_argument("--u-only")
    p.add_argument("--v-only")
    p.add_argument("--f", required=True)
    p = add("merge-sections", "glue local sections of a G_m-torsor on the line")
    p.add_argument("--data", required=True)
    p = add("trivialize-cocycle", "trivialize a pointed cocycle")
    p.add_argument("--data", required=True)
    p = add("split-cocycle", "split a 1-cocycle on a unimodular cover")
    p.add_argument("--data", required=True)
    p = add("cech-dims", "cohomology dimensions of an explicit complex")
    p.add_argument("--data", required=True)
    p = add("pn-cohomology", "dimensions of H^q(P^n, O(d))")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--table", help="dmin..dmax (write --table=-3..3 for negative bounds)")
    p = add("classify-unit", "is a Laurent polynomial a unit")
    p.add_argument("--g", required=True)
    p = add("twist", "glue datum and degree of O(d); O(-1) is glued by X and O(1) by 1/X")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--tensor", type=int, action="append")
    p = add("corpus", "run a directory of example cases")
    p.add_argument("directory")
    return parser


def _command_name(args: argparse.Namespace) -> str:
    return f"algebra {args.action}" if args.command == "algebra" else args.command


def _digest(command: str, inputs: dict, cfg: Config) -> str:
    # jobs and format do not change results, so they stay out of the digest
    settings = {k: v for k, v in cfg.as_dict().items() if k not in ("jobs", "format")}
    payload = _canon({"command": command, "inputs": inputs, "config": settings})
    return hashlib.sha256(payload.encode()).hexdigest()


COMPUTATION_ERRORS = (
    ArithmeticError,
    ValueError,
    RuntimeError,
    KeyError,
)


def run(argv: Sequence[str], environ: Optional[dict] = None) -> tuple[int, Optional[dict]]:
    """Execute one command; returns (exit code, report). Usage errors give a
    report with an ``error`` entry and no result."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except _Exit as e:
        return e.status, None
    except UsageError as e:
        return EXIT_USAGE, _error_report(None, "UsageError", str(e))
    command = _command_name(args)
    flags = {k: getattr(args, k, None) for k in CONFIG_FLAGS}
    try:
        cfg = load_config(flags, args.config, os.environ if environ is None else environ)
    except ConfigError as e:
        return EXIT_USAGE, _error_report(command, "UsageError", f"--{e.key.replace('_', '-')}: {e}")
    ctx = Ctx(args, cfg, explicit_field=args.field is not None)
    start = time.perf_counter()
    try:
        out = COMMANDS[command](ctx)
    except UsageError as e:
        return EXIT_USAGE, _error_report(command, "UsageError", str(e), cfg.format)
    except (ParseError, WireFormatError) as e:
        return EXIT_USAGE, _error_report(command, type(e).__name__, str(e), cfg.format)
    except COMPUTATION_ERRORS as e:
        return EXIT_ERROR, _error_report(command, type(e).__name__, str(e), cfg.format)
    elapsed = time.perf_counter() - start
    report = {
        "schema": SCHEMA,
        "command": command,
        "inputs_digest": _digest(command, ctx.inputs, cfg),
        "result": out.result,
        "verification": [{"check": name, "passed": ok} for name, ok in out.verification],
    }
    if args.timing:
        report["timing"] = {"seconds": round(elapsed, 6)}
    report["_format"] = cfg.format
    if out.text is not None:
        report["_text"] = out.text
    checks_ok = all(ok for _, ok in out.verification)
    if not checks_ok:
        code = EXIT_ERROR
    elif out.truth is None:
        code = EXIT_OK
    else:
        code = EXIT_OK if out.truth else EXIT_FALSE
    return code, report


def _error_report(command: Optional[str], kind: str, message: str, fmt: str = "json") -> dict:
    return {"schema": SCHEMA, "command": command, "error": {"type": kind, "message": message}, "_format": fmt}


def render(report: dict) -> str:
    """Serialize a report from :func:`run` in its configured format."""
    report = dict(report)
    fmt = report.pop("_format", "json")
    text = report.pop("_text", None)
    if fmt == "text":
        if "error" in report:
            return f"error ({report['error']['type']}): {report['error']['message']}"
        lines = [f"command: {report['command']}"]
        if text is not None:
            lines.append(text)
        else:
            for k, v in report["result"].items():
                lines.append(f"{k}: {_canon(v) if not isinstance(v, str) else v}")
        for c in report["verification"]:
            lines.append(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['check']}")
        if "timing" in report:
            lines.append(f"time: {report['timing']['seconds']:.3f}s")
        return "\n".join(lines)
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    code, report = run(argv)
    if report is not None:
        stream = sys.stderr if code == EXIT_USAGE else sys.stdout
        print(render(report), file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
