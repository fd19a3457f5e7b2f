"""Exact scalars, sparse polynomials and localized fractions."""

from .field import GF, QQ, Field, FieldError, PrimeField, RationalField, field_from_spec
from .parse import ParseError, parse_poly
from .poly import (
    LinearFactorization,
    MultiPoly,
    PolyRing,
    RingMismatch,
    ScanCapExceeded,
    ZeroPolynomialError,
    factor_linear,
)

__all__ = [
    "GF",
    "QQ",
    "Field",
    "FieldError",
    "LinearFactorization",
    "MultiPoly",
    "ParseError",
    "PolyRing",
    "PrimeField",
    "RationalField",
    "RingMismatch",
    "ScanCapExceeded",
    "ZeroPolynomialError",
    "factor_linear",
    "field_from_spec",
    "parse_poly",
]
