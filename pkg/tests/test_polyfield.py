from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zariski.groebner import Ideal
from zariski.polyfield import GF, QQ, FieldError, PolyRing, parse_poly
from zariski.polyfield.field import field_from_spec, is_prime
from zariski.polyfield.laurent import LaurentFraction, fraction_eq, normalize
from zariski.polyfield.parse import ParseError
from zariski.polyfield.poly import ZeroPolynomialError, factor_linear

sys.path.insert(0, str(Path(__file__).parent))
from oracles import brute_force_roots  # noqa: E402

QX = PolyRing(QQ, ("X",))
QXY = PolyRing(QQ, ("X", "Y"))


def P(text, ring=QXY):
    return parse_poly(text, ring)


# -- fields ---------------------------------------------------------------


def test_rationals_are_reduced():
    assert QQ(Fraction(6, -4)) == Fraction(-3, 2)
    assert QQ("-6/4") == Fraction(-3, 2)
    assert QQ("6/4").denominator == 2
    with pytest.raises(FieldError):
        QQ(0.5)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 101])
def test_prime_field_residues(p):
    F = GF(p)
    assert all(0 <= F(x) < p for x in range(-3 * p, 3 * p))
    for a in range(1, p):
        assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0


@pytest.mark.parametrize("spec", ["Fp:4", "Fp:1", "Fp:x", "R", ""])
def test_bad_field_specs(spec):
    with pytest.raises(FieldError):
        field_from_spec(spec)


def test_field_spec_roundtrip():
    assert field_from_spec("Q") == QQ
    assert field_from_spec("Fp:7") == GF(7)
    assert GF(7).spec == "Fp:7"


@given(st.integers(min_value=2, max_value=500))
def test_is_prime_matches_trial_division(n):
    assert is_prime(n) == all(n % d for d in range(2, n))


@given(st.fractions(), st.fractions())
def test_rational_field_axioms(a, b):
    F = QQ
    assert F.add(a, F.neg(a)) == 0
    if b != 0:
        assert F.mul(F.div(a, b), b) == a


# -- polynomial arithmetic ------------------------------------------------


def test_difference_of_squares():
    assert P("(X+1)*(X-1)", QX) == P("X^2-1", QX)


def test_add_zero_is_identity():
    f = P("3*X^2*Y - Y + 7")
    assert f + QXY.zero == f


def test_frobenius_over_f2():
    R = PolyRing(GF(2), ("X", "Y"))
    assert P("(X+Y)^2", R) == P("X^2+Y^2", R)
    assert str(P("(X+Y)^2", R)) == "X^2 + Y^2"


def test_no_zero_coefficients_stored():
    f = P("X + Y - X")
    assert f.as_dict() == {(0, 1): 1}
    assert P("X - X").is_zero()


def test_canonical_term_order_is_descending_grevlex():
    f = P("1 + Y + X + X*Y + Y^2 + X^2")
    assert [m for m, _ in f.terms()] == [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]


@pytest.mark.parametrize(
    "field_, poly, point, expected",
    [
        (GF(5), "X^2+1", (2,), 0),
        (QQ, "7", (123,), 7),
        (QQ, "X*Y-1", (2, Fraction(1, 2)), 0),
    ],
)
def test_evaluate(field_, poly, point, expected):
    names = ("X", "Y")[: len(point)]
    f = parse_poly(poly, PolyRing(field_, names))
    assert f.evaluate(point) == expected


poly_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-5, 5), max_size=5
)


@given(poly_terms, poly_terms, poly_terms)
@settings(max_examples=60)
def test_ring_axioms(a, b, c):
    f, g, h = (QXY.from_terms(list(t.items())) for t in (a, b, c))
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    assert f - f == QXY.zero
    assert hash(f + g) == hash(g + f)


@given(poly_terms, st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=60)
def test_evaluation_is_a_ring_map(a, x, y):
    f = QXY.from_terms(list(a.items()))
    g = P("X*Y + 2")
    assert (f * g).evaluate((x, y)) == f.evaluate((x, y)) * g.evaluate((x, y))


# -- parsing --------------------------------------------------------------


@pytest.mark.parametrize(
    "text, canonical",
    [
        ("X^2*Y - 3", "X^2*Y - 3"),
        ("2X Y", "2*X*Y"),
        ("X**2", "X^2"),
        ("−X + 1", "-X + 1"),
        ("(X+Y)/2", "1/2*X + 1/2*Y"),
    ],
)
def test_parse_forms(text, canonical):
    assert P(text) == P(canonical)


@pytest.mark.parametrize("text", ["X +", "X / Y", "(X", "X^Y", "Z"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        P(text)


@given(poly_terms)
@settings(max_examples=60)
def test_str_parses_back(a):
    f = QXY.from_terms(list(a.items()))
    assert P(str(f)) == f


# -- linear factors -------------------------------------------------------


def test_factor_x2_minus_1_f5():
    fac = factor_linear(P("X^2-1", PolyRing(GF(5), ("X",))))
    assert fac.unit == 1
    assert dict(fac.roots) == {1: 1, 4: 1}
    assert fac.cofactor.is_constant() and fac.cofactor.constant_value() == 1


def test_factor_no_roots_f3():
    R = PolyRing(GF(3), ("X",))
    fac = factor_linear(P("X^2+1", R))
    assert fac.roots == ()
    assert fac.cofactor == P("X^2+1", R)


def test_factor_given_factored_form():
    fac = factor_linear(P("3*(X-2)^2", QX))
    assert fac.unit == 3 and dict(fac.roots) == {2: 2}
    assert fac.cofactor == QX.one


def test_factor_zero_is_distinguished():
    with pytest.raises(ZeroPolynomialError):
        factor_linear(QX.zero)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@given(coeffs=st.lists(st.integers(0, 50), min_size=1, max_size=6))
@settings(max_examples=25)
def test_factor_matches_brute_force_roots(p, coeffs):
    R = PolyRing(GF(p), ("X",))
    f = R.from_terms(((i,), c) for i, c in enumerate(coeffs))
    if f.is_zero():
        return
    fac = factor_linear(f)
    assert fac.expand() == f
    assert dict(fac.roots) == brute_force_roots(coeffs, p)


@given(
    roots=st.lists(st.fractions(max_denominator=4).filter(lambda q: abs(q) < 6), max_size=4),
    unit=st.integers(1, 9),
)
@settings(max_examples=40)
def test_factor_rational_roots_recovered(roots, unit):
    f = QX.const(unit)
    for a in roots:
        f = f * (P("X", QX) - QX.const(a))
    fac = factor_linear(f)
    want: dict = {}
    for a in roots:
        want[a] = want.get(a, 0) + 1
    assert dict(fac.roots) == want
    assert fac.unit == unit
    assert fac.expand() == f


# -- fractions in localizations -------------------------------------------


def test_fraction_eq_same_numerators():
    x = P("X", QX)
    a = LaurentFraction.scalar(x + 1, x, 0)
    assert fraction_eq(a, a, Ideal(QX, []))
    assert not fraction_eq(a, LaurentFraction.scalar(x, x, 0), Ideal(QX, []))


def test_fraction_eq_cancels_base():
    x = P("X", QX)
    assert fraction_eq(LaurentFraction.scalar(x, x, 1), LaurentFraction.scalar(QX.one, x, 0), Ideal(QX, []))


def test_fraction_eq_nilpotent_kills():
    x = P("X", QX)
    I = Ideal(QX, [x**2])
    assert fraction_eq(LaurentFraction.scalar(x, x, 1), LaurentFraction.zero(x), I)


def test_normalize_lowers_exponent():
    x = P("X", QX)
    fr = normalize(LaurentFraction.scalar(x**2, x, 3), Ideal(QX, []))
    assert fr.exp == 1 and fr.num[0] == QX.one


@given(st.integers(0, 3), st.integers(0, 3), st.integers(-4, 4))
@settings(max_examples=40)
def test_normalize_preserves_value(k, j, c):
    x = P("X", QX)
    I = Ideal(QX, [])
    fr = LaurentFraction.scalar((x + c) * x**j, x, k)
    nf = normalize(fr, I)
    assert fraction_eq(fr, nf, I)
    assert nf.exp <= fr.exp


def test_fraction_invariants():
    x = P("X", QX)
    with pytest.raises(ValueError):
        LaurentFraction.scalar(x, QX.zero, 0)
    with pytest.raises(ValueError):
        LaurentFraction.scalar(x, x, -1)
