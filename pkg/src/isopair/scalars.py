"""Exact arithmetic over the quadratic field Q(sqrt2).

Every coefficient in the symbolic layer is a + b*sqrt2 with exact rational
a, b (stdlib Fraction). The representation is unique because sqrt2 is
irrational, so equality and zero tests are plain component comparisons and
identities verified with these coefficients are exact, not approximate.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]

_SQRT2 = math.sqrt(2.0)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class Scalar:
    """Element a + b*sqrt2 of Q(sqrt2)."""

    __slots__ = ("a", "b")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0):
        object.__setattr__(self, "a", _as_fraction(a))
        object.__setattr__(self, "b", _as_fraction(b))

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def of(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return Scalar(_as_fraction(value))

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def is_rational(self) -> bool:
        return not self.b

    def sign(self) -> int:
        """Sign of the real number a + b*sqrt2, computed exactly."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # mixed signs: compare a^2 with 2 b^2, the larger magnitude wins
        d = a * a - 2 * b * b
        side = 1 if a > 0 else -1
        return side * ((d > 0) - (d < 0))

    # -- arithmetic ---------------------------------------------------
    # Unknown operand types yield NotImplemented so Python can fall back
    # to the reflected method of richer types (Poly, RationalExpr, ...).

    @staticmethod
    def _coerce(other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other)
        return None

    def __add__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Scalar(-self.a, -self.b)

    def __mul__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.a * other.a + 2 * self.b * other.b,
                      self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        # 1/(a + b sqrt2) = (a - b sqrt2)/(a^2 - 2 b^2); the norm vanishes
        # only for a = b = 0 since sqrt2 is irrational
        norm = self.a * self.a - 2 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return Scalar(self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("Scalar exponent must be an int")
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ONE
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparisons / conversions -------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __float__(self):
        return float(self.a) + float(self.b) * _SQRT2

    def __repr__(self):
        return f"Scalar({self.a!r}, {self.b!r})"

    def __str__(self):
        return scalar_text(self)


def _frac_text(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def scalar_text(s: Scalar) -> str:
    """Canonical text: '0', 'p/q', 'p/q*sqrt2', 'p/q + r/s*sqrt2'."""
    if s.is_zero():
        return "0"
    parts = []
    if s.a:
        parts.append(_frac_text(s.a))
    if s.b:
        if s.b == 1:
            root = "sqrt2"
        elif s.b == -1:
            root = "-sqrt2"
        else:
            root = f"{_frac_text(s.b)}*sqrt2"
        parts.append(root)
    if len(parts) == 1:
        return parts[0]
    second = parts[1]
    if second.startswith("-"):
        return f"{parts[0]} - {second[1:]}"
    return f"{parts[0]} + {second}"


ZERO = Scalar(0)
ONE = Scalar(1)
TWO = Scalar(2)
SQRT2 = Scalar(0, 1)
HALF = Scalar(Fraction(1, 2))
INV_SQRT2 = Scalar(0, Fraction(1, 2))  # 1/sqrt2 = sqrt2/2


def binomial(n: int, k: int) -> int:
    return math.comb(n, k)
