"""Division polynomials psi_m, phi_m, omega_m with y eliminated.

Every polynomial is stored as ``scale * y**y_power * body(x)`` where ``body``
has no y; y^2 is always rewritten as x^3 + Ax + B. For odd m, psi_m is a
polynomial in x; for even m, psi_m = 2y * body.

Two coefficient rings are supported:

* generic: body lives in Z[A, B, x] (flint ``fmpz_mpoly``), exact but costly
  beyond m ~ 35;
* specialized to a curve: body lives in Z[x] (flint ``fmpz_poly``), used for
  evaluation and for the degree laws at large m.

The x-degree is the same in both rings. psi_m, phi_m, omega_m are weighted
homogeneous (x, A, B, y of weights 2, 4, 6, 3), so the top power of x can only
carry an integer constant, never a monomial in A or B.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import flint

from .curve import Curve, Point
from .errors import DegreeLawViolation, TorsionDenominator

_CTX = flint.fmpz_mpoly_ctx.get(("A", "B", "x"), "lex")


@dataclass(frozen=True)
class DivisionPoly:
    """``scale * y**y_power * body``; ``body`` is fmpz_poly (specialized) or fmpz_mpoly (generic)."""

    name: str
    m: int
    y_power: int
    scale: int
    body: object

    @property
    def parity(self) -> str:
        return "even" if self.m % 2 == 0 else "odd"

    @property
    def x_degree(self) -> int:
        return _x_degree(self.body)

    @property
    def degree(self) -> int:
        """Sum of partial degrees in x and y (A, B count as constants)."""
        return self.y_power + self.x_degree

    def leading_coefficient(self) -> int:
        return self.scale * _x_leading(self.body)

    def evaluate(self, P: Point) -> Fraction:
        if isinstance(self.body, flint.fmpz_mpoly):
            raise TypeError("evaluate a curve-specialized polynomial")
        val = eval_at_rational(self.body, P.x)
        if self.y_power:
            val *= P.y**self.y_power
        return self.scale * val

    def __str__(self):
        prefix = ""
        if self.scale != 1:
            prefix += f"{self.scale}*"
        if self.y_power:
            prefix += "y*" if self.y_power == 1 else f"y^{self.y_power}*"
        body = format_poly(self.body)
        return f"{prefix}({body})" if prefix else body


def _x_degree(p) -> int:
    if isinstance(p, flint.fmpz_poly):
        return p.degree()
    if p.is_zero():
        return -1
    return int(p.degrees()[2])


def _x_leading(p) -> int:
    if isinstance(p, flint.fmpz_poly):
        return int(p[p.degree()])
    lead = int(p[(0, 0, _x_degree(p))])
    if lead == 0:
        raise AssertionError("top x-power carries A or B")
    return lead


def eval_at_rational(poly: flint.fmpz_poly, x: Fraction) -> Fraction:
    """Evaluate an integer polynomial at p/q using only integer Horner steps."""
    d = poly.degree()
    if d < 0:
        return Fraction(0)
    p, q = x.numerator, x.denominator
    coeffs = [int(c) for c in poly.coeffs()]
    acc = coeffs[d]
    qpow = q
    for i in range(d - 1, -1, -1):
        acc = acc * p + coeffs[i] * qpow
        qpow *= q
    return Fraction(acc, q**d)


def format_poly(p) -> str:
    """Sparse terms, descending x-degree; inside a degree, descending A then B."""
    if isinstance(p, flint.fmpz_poly):
        terms = [((0, 0, i), int(c)) for i, c in enumerate(p.coeffs()) if c != 0]
    else:
        terms = [(mono, int(c)) for mono, c in zip(p.monoms(), p.coeffs())]
    if not terms:
        return "0"
    terms.sort(key=lambda t: (t[0][2], t[0][0], t[0][1]), reverse=True)
    out = []
    for (a, b, k), c in terms:
        factors = [name if e == 1 else f"{name}^{e}" for name, e in (("A", a), ("B", b), ("x", k)) if e]
        mag = abs(c)
        body = "*".join(([str(mag)] if mag != 1 or not factors else []) + factors)
        sign = "-" if c < 0 else "+"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


class DivisionPolynomials:
    """Memoized psi/phi/omega table for one coefficient ring.

    Pass a `Curve` to specialize A and B; leave it as None for the generic
    ring Z[A, B, x]. Fills are guarded by a lock, and values are immutable
    once stored.
    """

    def __init__(self, curve: Optional[Curve] = None):
        self.curve = curve
        if curve is None:
            A, B, x = _CTX.gens()
            one = _CTX.from_dict({(0, 0, 0): 1})
            zero = one - one
        else:
            x = flint.fmpz_poly([0, 1])
            A, B = curve.A, curve.B
            one = flint.fmpz_poly([1])
            zero = flint.fmpz_poly([])
        self.x = x
        self.F = x**3 + A * x + B  # y^2
        self._bodies = {
            0: zero,
            1: one,
            2: one,
            3: 3 * x**4 + 6 * A * x**2 + 12 * B * x - A**2,
            4: 2 * (x**6 + 5 * A * x**4 + 20 * B * x**3 - 5 * A**2 * x**2 - 4 * A * B * x - 8 * B**2 - A**3),
        }
        self._lock = threading.Lock()

    def body(self, k: int):
        """psi_k for odd k, psi_k / (2y) for even k; psi_{-k} = -psi_k."""
        if k < 0:
            return -self.body(-k)
        table = self._bodies
        if k in table:
            return table[k]
        with self._lock:
            top = max(table)
            for j in range(top + 1, k + 1):
                table[j] = self._next(j)
        return table[k]

    def _next(self, k: int):
        f = self._bodies
        n = k // 2
        if k % 2:
            # psi_{2n+1} = psi_{n+2} psi_n^3 - psi_{n-1} psi_{n+1}^3, with (2y)^4 = 16 F^2
            F2 = 16 * self.F**2
            if n % 2 == 0:
                return F2 * f[n + 2] * f[n] ** 3 - f[n - 1] * f[n + 1] ** 3
            return f[n + 2] * f[n] ** 3 - F2 * f[n - 1] * f[n + 1] ** 3
        # 2y psi_{2n} = psi_n (psi_{n+2} psi_{n-1}^2 - psi_{n-2} psi_{n+1}^2); the 4F cancels on both sides
        return f[n] * (f[n + 2] * f[n - 1] ** 2 - f[n - 2] * f[n + 1] ** 2)

    def psi(self, m: int) -> DivisionPoly:
        _check_m(m)
        if m % 2:
            return DivisionPoly("psi", m, 0, 1, self.body(m))
        return DivisionPoly("psi", m, 1, 2, self.body(m))

    def psi_squared(self, m: int) -> DivisionPoly:
        _check_m(m)
        f = self.body(m)
        if m % 2:
            return DivisionPoly("psi^2", m, 0, 1, f * f)
        return DivisionPoly("psi^2", m, 0, 1, 4 * self.F * f * f)

    def psi_cubed(self, m: int) -> DivisionPoly:
        _check_m(m)
        f = self.body(m)
        if m % 2:
            return DivisionPoly("psi^3", m, 0, 1, f**3)
        return DivisionPoly("psi^3", m, 1, 1, 8 * self.F * f**3)

    def phi(self, m: int) -> DivisionPoly:
        """phi_m = x psi_m^2 - psi_{m+1} psi_{m-1}."""
        _check_m(m)
        f, up, down = self.body(m), self.body(m + 1), self.body(m - 1)
        if m % 2:
            return DivisionPoly("phi", m, 0, 1, self.x * f * f - 4 * self.F * up * down)
        return DivisionPoly("phi", m, 0, 1, 4 * self.F * self.x * f * f - up * down)

    def omega(self, m: int) -> DivisionPoly:
        """omega_m from 4y omega_m = psi_{m+2} psi_{m-1}^2 - psi_{m-2} psi_{m+1}^2."""
        _check_m(m)
        g = self.body(m + 2) * self.body(m - 1) ** 2 - self.body(m - 2) * self.body(m + 1) ** 2
        if m % 2:
            # psi_{m+-1} are even, the (2y)^2 / 4y leaves a single y
            return DivisionPoly("omega", m, 1, 1, g)
        # psi_{m+-2} are even: 2y g / 4y = g / 2
        half = _exact_half(g)
        return DivisionPoly("omega", m, 0, 1, half)


def _check_m(m: int):
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")


def _exact_half(g):
    if isinstance(g, flint.fmpz_poly):
        coeffs = [int(c) for c in g.coeffs()]
        if any(c % 2 for c in coeffs):
            raise AssertionError("omega_m body not divisible by 2")
        return flint.fmpz_poly([c // 2 for c in coeffs])
    items = {mono: int(c) for mono, c in zip(g.monoms(), g.coeffs())}
    if any(c % 2 for c in items.values()):
        raise AssertionError("omega_m body not divisible by 2")
    return _CTX.from_dict({mono: c // 2 for mono, c in items.items()})


_GENERIC = DivisionPolynomials()
_TABLES: dict = {}
_TABLES_LOCK = threading.Lock()


def table_for(curve: Optional[Curve]) -> DivisionPolynomials:
    if curve is None:
        return _GENERIC
    with _TABLES_LOCK:
        if curve not in _TABLES:
            _TABLES[curve] = DivisionPolynomials(curve)
        return _TABLES[curve]


def psi(m: int, curve: Optional[Curve] = None) -> DivisionPoly:
    return table_for(curve).psi(m)


def phi(m: int, curve: Optional[Curve] = None) -> DivisionPoly:
    return table_for(curve).phi(m)


def omega(m: int, curve: Optional[Curve] = None) -> DivisionPoly:
    return table_for(curve).omega(m)


@dataclass(frozen=True)
class DegreeReport:
    m: int
    d_phi: int
    d_psi: int
    d_psi_sq: int
    d_psi_cubed: int
    d_omega: int
    lead_phi: int
    lead_psi_sq: int

    def laws(self) -> dict:
        """Each degree law as (measured, bound, holds). The first two are equalities."""
        m2 = self.m * self.m
        return {
            "d_phi = m^2": (self.d_phi, m2, self.d_phi == m2),
            "d_psi_sq = m^2-1": (self.d_psi_sq, m2 - 1, self.d_psi_sq == m2 - 1),
            "d_psi <= (m^2+1)/2": (self.d_psi, Fraction(m2 + 1, 2), self.d_psi <= Fraction(m2 + 1, 2)),
            "d_psi_cubed <= (3m^2-1)/2": (self.d_psi_cubed, Fraction(3 * m2 - 1, 2),
                                          self.d_psi_cubed <= Fraction(3 * m2 - 1, 2)),
            "d_omega <= 3(m^2+1)/2": (self.d_omega, Fraction(3 * (m2 + 1), 2),
                                      self.d_omega <= Fraction(3 * (m2 + 1), 2)),
            "lead(phi) = 1": (self.lead_phi, 1, self.lead_phi == 1),
            "lead(psi^2) = m^2": (self.lead_psi_sq, m2, self.lead_psi_sq == m2),
        }

    def to_dict(self) -> dict:
        return {
            "m": self.m, "d_phi": self.d_phi, "d_psi": self.d_psi, "d_psi_sq": self.d_psi_sq,
            "d_psi_cubed": self.d_psi_cubed, "d_omega": self.d_omega,
            "laws": {k: {"measured": v[0], "bound": str(v[1]), "holds": v[2]} for k, v in self.laws().items()},
        }


def degree_report(m: int, curve: Optional[Curve] = None) -> DegreeReport:
    """Measure x+y degrees of phi, psi, psi^2, psi^3, omega and check them against their laws.

    `curve=None` uses the generic ring; otherwise the curve-specialized one,
    which gives the same degrees (see module docstring) and scales to m ~ 100.
    """
    t = table_for(curve)
    ph, ps2 = t.phi(m), t.psi_squared(m)
    rep = DegreeReport(
        m=m,
        d_phi=ph.degree,
        d_psi=t.psi(m).degree,
        d_psi_sq=ps2.degree,
        d_psi_cubed=t.psi_cubed(m).degree,
        d_omega=t.omega(m).degree,
        lead_phi=ph.leading_coefficient(),
        lead_psi_sq=ps2.leading_coefficient(),
    )
    broken = [name for name, (_, _, ok) in rep.laws().items() if not ok]
    if broken:
        raise DegreeLawViolation(f"m={m}: {', '.join(broken)}")
    return rep


def mul_via_division_polys(m: int, P: Point) -> Point:
    """[m]P = (phi_m/psi_m^2, omega_m/psi_m^3) evaluated exactly at P."""
    _check_m(m)
    if P.is_identity:
        return P
    t = table_for(P.curve)
    den = t.psi_squared(m).evaluate(P)
    if den == 0:
        raise TorsionDenominator(f"psi_{m} vanishes at {P}")
    x = t.phi(m).evaluate(P) / den
    y = t.omega(m).evaluate(P) / t.psi_cubed(m).evaluate(P)
    return Point(P.curve, x, y)
