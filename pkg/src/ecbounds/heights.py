"""Weil-type heights over Q and a certified Neron-Tate height.

Real outputs come from `math.log` on exact integers. Interval endpoints are
widened outward by `LOG_RTOL` (relative) plus `LOG_ATOL`. That covers the
double-precision error of one log, with a wide margin.

Neron-Tate normalization: hhat(P) = 1/2 lim 4^-n h(x([2^n]P)), the
convention under which

    -C_minus <= hhat(P) - h(x(P))/2 <= C_plus

with the Silverman constants computed by `silverman_constants`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Sequence

import gmpy2

from .curve import Curve, Point
from .errors import AllZero, EnvelopeViolation, PrecisionUnreachable

LOG_RTOL = 1e-12
LOG_ATOL = 1e-300
LOG2 = math.log(2)
LOG3 = math.log(3)

# Silverman's additive constants
SILVERMAN_LOWER_ABS = 0.973
SILVERMAN_UPPER_ABS = 1.07

DEFAULT_TOL = 1e-3
MAX_DOUBLING_DEPTH = 12


@dataclass(frozen=True)
class HeightInterval:
    lo: float
    hi: float
    depth: Optional[int] = None

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2

    def __contains__(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def __add__(self, other: "HeightInterval") -> "HeightInterval":
        depth = max((d for d in (self.depth, other.depth) if d is not None), default=None)
        return HeightInterval(_down(self.lo + other.lo), _up(self.hi + other.hi), depth)

    def scale(self, k: float) -> "HeightInterval":
        if k < 0:
            raise ValueError("heights scale by nonnegative factors only")
        return HeightInterval(_down(self.lo * k), _up(self.hi * k), self.depth)

    def to_dict(self) -> dict:
        return {"lo": repr(self.lo), "hi": repr(self.hi), "depth": self.depth}

    @classmethod
    def from_dict(cls, d: dict) -> "HeightInterval":
        return cls(float(d["lo"]), float(d["hi"]), d.get("depth"))


ZERO = HeightInterval(0.0, 0.0, 0)


def _up(v: float) -> float:
    return math.nextafter(v, math.inf)


def _down(v: float) -> float:
    return math.nextafter(v, -math.inf)


def _log_int(n) -> float:
    """log of a positive integer of any size (int or mpz)."""
    bits = int(gmpy2.bit_length(gmpy2.mpz(n)))
    if bits <= 1000:
        return math.log(int(n))
    shift = bits - 64
    return math.log(int(n >> shift)) + shift * LOG2


def _widen(v: float) -> tuple:
    slack = abs(v) * LOG_RTOL + LOG_ATOL
    return v - slack, v + slack


def _coprime_integers(coords: Sequence) -> list:
    vals = [Fraction(c) for c in coords]
    if not vals:
        raise ValueError("need at least one coordinate")
    if all(v == 0 for v in vals):
        raise AllZero("projective point with all coordinates zero")
    den = reduce(math.lcm, (v.denominator for v in vals))
    ints = [int(v * den) for v in vals]
    g = reduce(math.gcd, ints)
    return [i // g for i in ints]


def weil_height_projective(coords: Sequence) -> float:
    """h(P) for P = (c_0 : ... : c_m) with rational c_i."""
    ints = _coprime_integers(coords)
    return _log_int(max(abs(i) for i in ints))


def h2_projective(coords: Sequence) -> float:
    """Like `weil_height_projective`, but the archimedean term is log of the euclidean norm."""
    ints = _coprime_integers(coords)
    return 0.5 * _log_int(sum(i * i for i in ints))


def weil_height(x) -> float:
    """h(x) = h(x : 1) for a rational number."""
    x = Fraction(x)
    return _log_int(max(abs(x.numerator), x.denominator))


def h_infty(x) -> float:
    """Archimedean part max(log|x|, 0); over Q there is a single infinite place."""
    x = Fraction(x)
    if abs(x) <= 1:
        return 0.0
    return _log_int(abs(x.numerator)) - _log_int(x.denominator)


def hW(curve: Curve) -> float:
    """Height of (1 : A^(1/2) : B^(1/3)); finite places vanish for integral A, B."""
    terms = [0.0]
    if curve.A:
        terms.append(0.5 * _log_int(abs(curve.A)))
    if curve.B:
        terms.append(_log_int(abs(curve.B)) / 3)
    return max(terms)


def silverman_constants(curve: Curve) -> tuple:
    """(C_minus, C_plus), rounded up, with -C_minus <= hhat - h(x)/2 <= C_plus."""
    hj = weil_height(curve.j)
    hd = weil_height(curve.delta)
    hinf = h_infty(curve.j)
    c_minus = hj / 24 + hd / 12 + hinf / 12 + SILVERMAN_LOWER_ABS
    c_plus = hd / 12 + hinf / 12 + SILVERMAN_UPPER_ABS
    return _widen(c_minus)[1], _widen(c_plus)[1]


def doubling_depth(curve: Curve, tol: float) -> int:
    """Smallest n with 4^-n * max(C_minus, C_plus) <= tol / 2."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    c = max(silverman_constants(curve))
    n = 0
    while c / 4**n > tol / 2:
        n += 1
    return n


def _double_x(X, Z, A, B, R):
    """x-only doubling on coprime (X : Z); the common factor of the images divides R."""
    X2, Z2 = X * X, Z * Z
    Xn = X2 * X2 - 2 * A * X2 * Z2 - 8 * B * X * Z2 * Z + A * A * Z2 * Z2
    Zn = 4 * Z * (X2 * X + A * X * Z2 + B * Z2 * Z)
    g = gmpy2.gcd(gmpy2.gcd(R, Xn), Zn)
    if g > 1:
        Xn //= g
        Zn //= g
    return Xn, Zn


def neron_tate(P: Point, tol: float = DEFAULT_TOL, max_depth: int = MAX_DOUBLING_DEPTH) -> HeightInterval:
    """Certified enclosure of hhat(P), of width at most `tol`.

    Doubles x(P) n times and applies the Silverman envelope to [2^n]P:
    hhat(P) in 4^-n [h(x([2^n]P))/2 - C_minus, h(x([2^n]P))/2 + C_plus].
    If some [2^k]P is the identity, or x repeats along the doubling orbit,
    P is torsion and the result is [0, 0].
    """
    if P.is_identity:
        return ZERO
    E = P.curve
    n = doubling_depth(E, tol)
    if n > max_depth:
        raise PrecisionUnreachable(f"tol={tol} needs doubling depth {n} > cap {max_depth}")
    c_minus, c_plus = silverman_constants(E)
    A, B = gmpy2.mpz(E.A), gmpy2.mpz(E.B)
    R = 256 * (4 * A**3 + 27 * B**2) ** 2
    X, Z = gmpy2.mpz(P.x.numerator), gmpy2.mpz(P.x.denominator)
    seen = {(X, Z)}
    for k in range(n):
        X, Z = _double_x(X, Z, A, B, R)
        if Z == 0 or (X, Z) in seen:
            return HeightInterval(0.0, 0.0, k + 1)
        seen.add((X, Z))
    h_lo, h_hi = _widen(_log_int(max(abs(X), abs(Z))))
    scale = 4.0**-n
    lo = _down((h_lo / 2 - c_minus) * scale)
    hi = _up((h_hi / 2 + c_plus) * scale)
    return HeightInterval(max(lo, 0.0), hi, n)


def canonical_height_product(points: Iterable[Point], tol: float = DEFAULT_TOL) -> HeightInterval:
    """hhat on E^N is the sum of the coordinate heights."""
    total = ZERO
    for P in points:
        total = total + neron_tate(P, tol)
    return total


@dataclass(frozen=True)
class HeightComparison:
    """Signed slacks (>= 0 means the inequality holds). None means the check was skipped."""

    h: float
    h2: float
    hhat: HeightInterval
    slack_h_le_h2: float
    slack_h2_le_h_plus: float
    silverman_lower: Optional[float]
    silverman_upper: Optional[float]
    zimmer_lower: Optional[float]
    zimmer_upper: Optional[float]

    def slacks(self) -> dict:
        return {
            "h <= h2": self.slack_h_le_h2,
            "h2 <= h + log(m+1)/2": self.slack_h2_le_h_plus,
            "silverman lower": self.silverman_lower,
            "silverman upper": self.silverman_upper,
            "zimmer lower": self.zimmer_lower,
            "zimmer upper": self.zimmer_upper,
        }

    def to_dict(self) -> dict:
        return {"h": repr(self.h), "h2": repr(self.h2), "hhat": self.hhat.to_dict(),
                "slacks": {k: (None if v is None else repr(v)) for k, v in self.slacks().items()}}


def height_comparison_report(P: Point, tol: float = DEFAULT_TOL) -> HeightComparison:
    """Evaluate both sides of every height comparison for P in P_2 = (x : y : 1).

    Raises EnvelopeViolation if any slack falls below minus the enclosure
    width (plus log rounding); that would point to a bug here, not in the
    inequalities.
    """
    E = P.curve
    if P.is_identity:
        coords = (0, 1, 0)
    else:
        coords = (P.x, P.y, 1)
    h = weil_height_projective(coords)
    h2 = h2_projective(coords)
    hhat = neron_tate(P, tol)
    fuzz = hhat.width + 1e-9 * (1 + h)
    s1 = h2 - h
    s2 = h + LOG3 / 2 - h2
    if P.is_identity:
        rep = HeightComparison(h, h2, hhat, s1, s2, None, None, None, None)
    else:
        c_minus, c_plus = silverman_constants(E)
        half_hx = weil_height(P.x) / 2
        w = hW(E)
        diff_z = h / 3 - hhat.mid
        rep = HeightComparison(
            h, h2, hhat, s1, s2,
            silverman_lower=(hhat.mid - half_hx) + c_minus,
            silverman_upper=c_plus - (hhat.mid - half_hx),
            zimmer_lower=diff_z + w / 2 + 7 * LOG2 / 6,
            zimmer_upper=w + 2 * LOG2 - diff_z,
        )
    bad = {k: v for k, v in rep.slacks().items() if v is not None and v < -fuzz}
    if bad:
        raise EnvelopeViolation(f"{P}: {bad}")
    return rep


def mu_conversion(mu_hat: float, N: int, curve: Curve, direction: str) -> float:
    """Essential minima: 3 muhat - 3 c2(E,N) <= mu <= 3 muhat + c3(E,N).

    direction="up" returns the upper estimate of mu, "down" the lower one.
    """
    from .bounds import c2, c3, evalf

    if direction == "up":
        return 3 * mu_hat + evalf(c3(N), curve)
    if direction == "down":
        return 3 * mu_hat - 3 * evalf(c2(N), curve)
    raise ValueError(f"direction must be 'up' or 'down', not {direction!r}")
