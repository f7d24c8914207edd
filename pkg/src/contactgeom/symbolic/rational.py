"""Canonical rational functions over a fixed variable tuple."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence, Union

from ..errors import ChartMismatch, DivisionByZero, PoleAtPoint, UnknownVariable
from .poly import Polynomial, Scalar, divide_exact, poly_gcd

Rational = Fraction
Point = Mapping[str, Fraction]


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den's grlex leading coefficient = 1.

    Zero is 0/1.  Because the form is canonical, equality is structural.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        if den is None:
            den = Polynomial.constant(num.variables, 1)
        if num.variables != den.variables:
            raise ChartMismatch(f"variables {num.variables} vs {den.variables}")
        num, den = _canonical(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _make(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        f = cls.__new__(cls)
        f.num = num
        f.den = den
        f._hash = None
        return f

    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> "RationalFunction":
        variables = tuple(variables)
        return cls._make(Polynomial.constant(variables, c), Polynomial.constant(variables, 1))

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "RationalFunction":
        variables = tuple(variables)
        return cls._make(Polynomial.variable(variables, name), Polynomial.constant(variables, 1))

    @property
    def variables(self) -> tuple[str, ...]:
        return self.num.variables

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: object) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.variables != self.variables:
                raise ChartMismatch(f"variables {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RationalFunction.constant(self.variables, other)
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return NotImplemented

    def __add__(self, other: object) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._make(-self.num, self.den)

    def __sub__(self, other: object) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, -other)

    def __rsub__(self, other: object) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(other, -self)

    def __mul__(self, other: object) -> "RationalFunction":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return RationalFunction.constant(self.variables, 0)
            return RationalFunction._make(self.num.scale(other), self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, other)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZero("inverse of the zero function")
        lc = self.num.leading_coefficient()
        return RationalFunction._make(self.den.scale(1 / lc), self.num.scale(1 / lc))

    def __truediv__(self, other: object) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise DivisionByZero(f"division of {self} by zero")
        return _mul(self, other.inverse())

    def __rtruediv__(self, other: object) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int) -> "RationalFunction":
        if not isinstance(k, int):
            raise TypeError("integer exponent expected")
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction._make(self.num ** k, self.den ** k)

    def diff(self, var: str) -> "RationalFunction":
        dn = self.num.diff(var)
        if self.den.is_constant():
            return RationalFunction._make(dn, self.den)
        dd = self.den.diff(var)
        if dd.is_zero():
            return RationalFunction(dn, self.den)
        return RationalFunction(dn * self.den - self.num * dd, self.den * self.den)

    def evaluate(self, point: Point) -> Fraction:
        try:
            values = [Fraction(point[v]) for v in self.variables]
        except KeyError as exc:
            raise UnknownVariable(f"point does not assign coordinate {exc.args[0]!r}") from None
        d = self.den.evaluate(values)
        if d == 0:
            raise PoleAtPoint(f"denominator {self.den} vanishes at {dict(point)}")
        return self.num.evaluate(values) / d

    # -- comparison / printing -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self) -> str:
        if self.den.is_constant():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"


RF = RationalFunction
ScalarLike = Union[RationalFunction, int, Fraction]


def _canonical(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    one = Polynomial.constant(num.variables, 1)
    if num.is_zero():
        return num, one
    if den.is_constant():
        return num.scale(1 / den.constant_value()), one
    g = poly_gcd(num, den)
    if not g.is_constant():
        num = divide_exact(num, g)
        den = divide_exact(den, g)
    lc = den.leading_coefficient()
    if lc != 1:
        num = num.scale(1 / lc)
        den = den.scale(1 / lc)
    return num, den


def _add(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    if a.num.is_zero():
        return b
    if b.num.is_zero():
        return a
    ad, bd = a.den, b.den
    if ad.is_constant() and bd.is_constant():
        return RationalFunction._make(a.num + b.num, ad)
    if ad.is_constant():
        # gcd(a*bd + bn, bd) = gcd(bn, bd) = 1
        return RationalFunction._make(a.num * bd + b.num, bd)
    if bd.is_constant():
        return RationalFunction._make(a.num + b.num * ad, ad)
    if ad == bd:
        return RationalFunction(a.num + b.num, ad)
    g = poly_gcd(ad, bd)
    if g.is_constant():
        num = a.num * bd + b.num * ad
        return RationalFunction._make(num, ad * bd) if not num.is_zero() else RationalFunction.constant(a.variables, 0)
    ad_ = divide_exact(ad, g)
    bd_ = divide_exact(bd, g)
    num = a.num * bd_ + b.num * ad_
    if num.is_zero():
        return RationalFunction.constant(a.variables, 0)
    # gcd(num, ad_*bd_*g) = gcd(num, g)
    h = poly_gcd(num, g)
    if not h.is_constant():
        num = divide_exact(num, h)
        g = divide_exact(g, h)
    return RationalFunction._make(num, ad_ * bd_ * g)


def _mul(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    if a.num.is_zero() or b.num.is_zero():
        return RationalFunction.constant(a.variables, 0)
    an, ad, bn, bd = a.num, a.den, b.num, b.den
    if not bd.is_constant():
        g1 = poly_gcd(an, bd)
        if not g1.is_constant():
            an, bd = divide_exact(an, g1), divide_exact(bd, g1)
    if not ad.is_constant():
        g2 = poly_gcd(bn, ad)
        if not g2.is_constant():
            bn, ad = divide_exact(bn, g2), divide_exact(ad, g2)
    # both denominators are monic in grlex, so is their product
    return RationalFunction._make(an * bn, ad * bd)


# -- the operation surface -----------------------------------------------

def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def rf_partial(f: RationalFunction, var: str) -> RationalFunction:
    return f.diff(var)


def rf_eval(f: RationalFunction, p: Point) -> Fraction:
    return f.evaluate(p)


def rf_equal(a: RationalFunction, b: RationalFunction) -> bool:
    if a.variables != b.variables:
        raise ChartMismatch(f"variables {a.variables} vs {b.variables}")
    return (a - b).is_zero()
