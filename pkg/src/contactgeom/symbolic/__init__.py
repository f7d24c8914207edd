"""Exact polynomial and rational-function arithmetic."""
from .parse import parse_expression, parse_rational
from .poly import Polynomial, divide_exact, poly_gcd
from .rational import (
    RF,
    Point,
    Rational,
    RationalFunction,
    rf_arith,
    rf_equal,
    rf_eval,
    rf_partial,
)

__all__ = [
    "Polynomial",
    "Point",
    "RF",
    "Rational",
    "RationalFunction",
    "divide_exact",
    "parse_expression",
    "parse_rational",
    "poly_gcd",
    "rf_arith",
    "rf_equal",
    "rf_eval",
    "rf_partial",
]
