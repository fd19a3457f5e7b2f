from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zariski.polyfield import GF, QQ
from zariski.proj import (
    CapExceeded,
    NotAUnit,
    ProjPoint,
    TwistSpec,
    bundle_degree,
    chart_cover,
    classify_unit,
    closed_form_dims,
    cohomology_contributions,
    cohomology_Pn,
    dehomogenize,
    euler_characteristic,
    laurent_ring,
    p1_sections_via_charts,
    point_eq,
    projective_points,
    tensor_glue,
    twist_glue,
)

L = laurent_ring(QQ)
X = L.gen(0)
F5 = GF(5)


# -- points ---------------------------------------------------------------


@pytest.mark.parametrize(
    "p, q, expected",
    [
        ((1, 2), (2, 4), True),
        ((1, 0), (0, 1), False),
        ((3, 4), (3, 4), True),
        ((0, 2, 3), (0, 4, 1), True),
        ((0, 2, 3), (0, 4, 2), False),
    ],
)
def test_point_eq(p, q, expected):
    assert point_eq(ProjPoint(F5, p), ProjPoint(F5, q)) is expected


def test_zero_vector_is_not_a_point():
    with pytest.raises(ValueError):
        ProjPoint(F5, (0, 0))


def test_point_eq_dimension_mismatch():
    with pytest.raises(ValueError):
        point_eq(ProjPoint(F5, (1, 0)), ProjPoint(F5, (1, 0, 0)))


@given(
    st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)),
    st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)),
)
def test_minors_agree_with_normalization(a, b):
    if not any(a) or not any(b):
        return
    p, q = ProjPoint(F5, a), ProjPoint(F5, b)
    assert point_eq(p, q) == (p.coords == q.coords)


@given(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)), st.integers(1, 4))
def test_scaling_gives_equal_points(a, lam):
    if not any(a):
        return
    p = ProjPoint(F5, a)
    q = ProjPoint(F5, tuple(lam * x for x in a))
    assert point_eq(p, q) and p == q


@pytest.mark.parametrize(
    "coords, charts",
    [((1, 0, 0), {0}), ((1, 1), {0, 1}), ((0, 1), {1}), ((0, 3, 2), {1, 2})],
)
def test_chart_cover(coords, charts):
    assert chart_cover(ProjPoint(F5, coords)) == charts


def test_p1_over_f2_is_covered():
    pts = list(projective_points(1, GF(2)))
    assert [p.coords for p in pts] == [(1, 0), (1, 1), (0, 1)]
    assert all(chart_cover(p) for p in pts)


def test_dehomogenize():
    p = ProjPoint(F5, (2, 4, 1))
    assert dehomogenize(p, 0) == (2, 3)
    assert dehomogenize(p, 2) == (2, 4)
    with pytest.raises(ValueError):
        dehomogenize(ProjPoint(F5, (0, 1)), 0)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("q", [2, 3, 5])
def test_point_count(n, q):
    pts = list(projective_points(n, GF(q)))
    assert len(pts) == (q ** (n + 1) - 1) // (q - 1)
    # pairwise distinct under the minor criterion
    for i, p in enumerate(pts):
        assert not any(point_eq(p, r) for r in pts[i + 1:])


# -- units and twists -----------------------------------------------------


@pytest.mark.parametrize("g, expected", [(3 * X**2, (3, 2)), (L.one, (1, 0)), (L.monomial([-4]) * 7, (7, -4))])
def test_classify_unit(g, expected):
    assert classify_unit(g) == expected


@pytest.mark.parametrize("g", [X + X**2, L.zero, X - 1])
def test_non_units(g):
    with pytest.raises(NotAUnit):
        classify_unit(g)


def test_twist_sign_convention():
    g = twist_glue(-1)
    assert g.unit == X
    assert bundle_degree(g) == -1
    assert twist_glue(1).unit == L.monomial([-1])


def test_tensor_of_twists():
    assert bundle_degree(tensor_glue(twist_glue(1), twist_glue(1))) == 2


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_degree_is_additive(a, b):
    assert bundle_degree(tensor_glue(twist_glue(a), twist_glue(b))) == a + b
    assert bundle_degree(tensor_glue(twist_glue(a), twist_glue(-a))) == 0


@given(st.integers(1, 9), st.integers(-5, 5), st.integers(1, 9), st.integers(-5, 5))
def test_classify_is_multiplicative(a, m, b, k):
    ga, gb = L.monomial([m]) * a, L.monomial([k]) * b
    assert classify_unit(ga * gb) == (a * b, m + k)


@pytest.mark.parametrize("d", range(-4, 6))
def test_sections_via_chart_pullback(d):
    # second oracle: kernel of k[t] x k[1/t] -> k[t, 1/t]
    want = d + 1 if d >= 0 else 0
    assert p1_sections_via_charts(twist_glue(d), degree_bound=abs(d) + 3) == want


# -- cohomology -----------------------------------------------------------


@pytest.mark.parametrize(
    "n, d, dims",
    [
        (1, 0, [1, 0]),
        (2, 0, [1, 0, 0]),
        (1, -2, [0, 1]),
        (1, 3, [4, 0]),
        (2, -3, [0, 0, 1]),
        (3, -4, [0, 0, 0, 1]),
    ],
)
def test_cohomology_examples(n, d, dims):
    spec = TwistSpec(n, d)
    assert cohomology_Pn(spec) == dims
    assert closed_form_dims(spec) == dims


def test_single_contribution_for_minus_three():
    contrib = cohomology_contributions(TwistSpec(2, -3))
    assert contrib == {(-1, -1, -1): (0, 0, 1)}


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("d", range(-8, 9))
def test_cohomology_matches_closed_form(n, d):
    spec = TwistSpec(n, d)
    dims = cohomology_Pn(spec)
    assert dims == closed_form_dims(spec)
    assert sum((-1) ** q * h for q, h in enumerate(dims)) == euler_characteristic(n, d)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("d", range(-8, 9))
def test_serre_symmetry(n, d):
    assert cohomology_Pn(TwistSpec(n, d))[0] == cohomology_Pn(TwistSpec(n, -d - n - 1))[n]


@pytest.mark.parametrize("margin", [0, 1, 3])
def test_window_margin_does_not_matter(margin):
    assert cohomology_Pn(TwistSpec(2, -5), margin) == [0, 0, 6]


@pytest.mark.parametrize("p", [2, 3])
def test_cohomology_over_prime_fields(p):
    assert cohomology_Pn(TwistSpec(2, 2, GF(p))) == [6, 0, 0]


@pytest.mark.parametrize("n, d", [(5, 0), (0, 1), (1, 13), (2, -13)])
def test_caps(n, d):
    with pytest.raises(CapExceeded):
        cohomology_Pn(TwistSpec(n, d))


def test_euler_characteristic_polynomial():
    assert euler_characteristic(2, 3) == comb(5, 2)
    assert euler_characteristic(2, -3) == 1
    assert euler_characteristic(1, -2) == -1
