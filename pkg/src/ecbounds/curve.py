"""Exact chord-and-tangent arithmetic on y^2 = x^3 + Ax + B over the rationals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import CurveMismatch, NotOnCurve, SingularCurve

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class Curve:
    """Weierstrass model with integer coefficients.

    `delta` and `j` are derived on construction; a zero discriminant raises
    `SingularCurve`.
    """

    A: int
    B: int
    delta: int = field(init=False)
    j: Fraction = field(init=False)

    def __post_init__(self):
        if not (isinstance(self.A, int) and isinstance(self.B, int)):
            raise TypeError("A and B must be integers")
        delta = -16 * (4 * self.A**3 + 27 * self.B**2)
        if delta == 0:
            raise SingularCurve(f"y^2 = x^3 + {self.A}x + {self.B} has zero discriminant")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "j", Fraction(-1728 * (4 * self.A) ** 3, delta))

    def contains(self, x: Rational, y: Rational) -> bool:
        return y * y == x**3 + self.A * x + self.B

    def point(self, x: Rational, y: Rational) -> "Point":
        return Point(self, Fraction(x), Fraction(y))

    @property
    def identity(self) -> "Point":
        return Point(self, None, None)

    def __str__(self):
        return f"y^2 = x^3 + ({self.A})x + ({self.B})"


def new_curve(A: int, B: int) -> Curve:
    return Curve(A, B)


# The curve y^2 = x^3 + x - 1 and its Mordell-Weil generator (rank 1, no torsion).
E0 = Curve(1, -1)


@dataclass(frozen=True)
class Point:
    """A rational point, or the identity when `x is None`."""

    curve: Curve
    x: Optional[Fraction]
    y: Optional[Fraction]

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("identity must have both coordinates None")
        if self.x is not None:
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))
            if not self.curve.contains(self.x, self.y):
                raise NotOnCurve(f"({self.x}, {self.y}) is not on {self.curve}")

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __add__(self, other: "Point") -> "Point":
        return add(self, other)

    def __neg__(self) -> "Point":
        return neg(self)

    def __sub__(self, other: "Point") -> "Point":
        return add(self, neg(other))

    def __rmul__(self, m: int) -> "Point":
        return scalar_mul(m, self)

    def serialize(self) -> str:
        return serialize_point(self)

    def __str__(self):
        return serialize_point(self)


G0 = Point(E0, Fraction(1), Fraction(1))


def add(P: Point, Q: Point) -> Point:
    if P.curve != Q.curve:
        raise CurveMismatch(f"{P.curve} vs {Q.curve}")
    E = P.curve
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    if P.x == Q.x:
        if P.y == -Q.y:
            return E.identity
        # tangent; y != 0 here since y == -y was handled above
        lam = (3 * P.x * P.x + E.A) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return Point(E, x3, y3)


def neg(P: Point) -> Point:
    if P.is_identity:
        return P
    return Point(P.curve, P.x, -P.y)


def scalar_mul(m: int, P: Point) -> Point:
    """[m]P by double-and-add."""
    if m < 0:
        return neg(scalar_mul(-m, P))
    result = P.curve.identity
    addend = P
    while m:
        if m & 1:
            result = add(result, addend)
        m >>= 1
        if m:
            addend = add(addend, addend)
    return result


def serialize_point(P: Point) -> str:
    if P.is_identity:
        return "O"

    def q(v: Fraction) -> str:
        return f"{v.numerator}/{v.denominator}"

    return f"{q(P.x)},{q(P.y)}"


def parse_point(text: str, curve: Curve) -> Point:
    """Inverse of `serialize_point`; also accepts plain integers like ``"1,1"``."""
    text = text.strip()
    if text == "O":
        return curve.identity
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'x,y' or 'O', got {text!r}")
    return Point(curve, Fraction(parts[0].strip()), Fraction(parts[1].strip()))
