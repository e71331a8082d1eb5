import pytest
import sympy as sp

from ecbounds.curve import E0, G0, Curve, scalar_mul
from ecbounds.divpoly import (
    DivisionPolynomials, degree_report, mul_via_division_polys, omega, phi, psi,
)
from ecbounds.errors import TorsionDenominator

A, B, x, y = sp.symbols("A B x y")
F = x**3 + A * x + B


def to_sympy(dp):
    """Independent view of a DivisionPoly as a sympy expression in A, B, x, y."""
    body = sum(int(c) * A**a * B**b * x**k for (a, b, k), c in zip(dp.body.monoms(), dp.body.coeffs()))
    return dp.scale * y**dp.y_power * body


def reduce_y(expr):
    """Rewrite y^2 -> F in an expanded polynomial."""
    p = sp.Poly(sp.expand(expr), y)
    out = 0
    for (e,), c in zip(p.monoms(), p.coeffs()):
        out += c * F ** (e // 2) * y ** (e % 2)
    return sp.expand(out)


def test_psi_small():
    assert sp.expand(to_sympy(psi(1))) == 1
    assert sp.expand(to_sympy(psi(2))) == 2 * y
    assert sp.expand(to_sympy(psi(3))) == sp.expand(3 * x**4 + 6 * A * x**2 + 12 * B * x - A**2)
    assert psi(2).parity == "even" and psi(2).scale == 2 and str(psi(2)) == "2*y*(1)"


def test_psi5_against_sympy_expansion():
    psi2 = 2 * y
    psi3 = 3 * x**4 + 6 * A * x**2 + 12 * B * x - A**2
    psi4 = 4 * y * (x**6 + 5 * A * x**4 + 20 * B * x**3 - 5 * A**2 * x**2 - 4 * A * B * x - 8 * B**2 - A**3)
    oracle = reduce_y(psi4 * psi2**3 - 1 * psi3**3)
    assert sp.expand(to_sympy(psi(5)) - oracle) == 0


def test_psi_recursions_against_sympy_up_to_10():
    # build psi_k with raw sympy recursions (y kept symbolic), then reduce y^2
    ps = {0: sp.Integer(0), 1: sp.Integer(1), 2: 2 * y,
          3: 3 * x**4 + 6 * A * x**2 + 12 * B * x - A**2,
          4: 4 * y * (x**6 + 5 * A * x**4 + 20 * B * x**3 - 5 * A**2 * x**2 - 4 * A * B * x - 8 * B**2 - A**3)}
    for k in range(5, 11):
        n = k // 2
        if k % 2:
            ps[k] = reduce_y(ps[n + 2] * ps[n] ** 3 - ps[n - 1] * ps[n + 1] ** 3)
        else:
            num = reduce_y(ps[n] * (ps[n + 2] * ps[n - 1] ** 2 - ps[n - 2] * ps[n + 1] ** 2))
            ps[k] = reduce_y(sp.cancel(num * y / (2 * F)))
    for k in range(1, 11):
        assert sp.expand(to_sympy(psi(k)) - ps[k]) == 0, k


def test_phi_examples():
    assert sp.expand(to_sympy(phi(1))) == x
    assert sp.expand(to_sympy(phi(2))) == sp.expand(x**4 - 2 * A * x**2 - 8 * B * x + A**2)
    assert str(phi(2)) == "x^4 - 2*A*x^2 - 8*B*x + A^2"


def test_omega_small():
    assert sp.expand(to_sympy(omega(1))) == y
    # omega_2 = psi_4 / (4y)
    expected = 2 * (x**6 + 5 * A * x**4 + 20 * B * x**3 - 5 * A**2 * x**2 - 4 * A * B * x - 8 * B**2 - A**3) / 2
    assert sp.expand(to_sympy(omega(2)) - expected) == 0


@pytest.mark.parametrize("m", range(1, 31))
def test_phi_leading_term(m):
    rep = degree_report(m, E0)
    assert rep.lead_phi == 1
    assert rep.d_phi == m * m


def test_degree_report_examples():
    r1 = degree_report(1)
    assert (r1.d_phi, r1.d_psi_sq) == (1, 0)
    r2 = degree_report(2)
    assert (r2.d_phi, r2.d_psi_sq) == (4, 3)
    r7 = degree_report(7)
    assert (r7.d_phi, r7.d_psi_sq) == (49, 48)


@pytest.mark.parametrize("m", range(1, 17))
def test_generic_and_specialized_degrees_agree(m):
    g, s = degree_report(m), degree_report(m, E0)
    assert g == s
    s2 = degree_report(m, Curve(-7, 10))
    assert s2 == s


def test_degree_laws_up_to_60():
    for m in range(1, 61):
        degree_report(m, E0)  # raises DegreeLawViolation on failure


def test_mul_small():
    assert mul_via_division_polys(1, G0) == G0
    P2 = mul_via_division_polys(2, G0)
    assert (P2.x, P2.y) == (2, -3)
    assert mul_via_division_polys(5, G0) == scalar_mul(5, G0)


@pytest.mark.parametrize("k", range(1, 6))
def test_oracle_equivalence(k):
    P = scalar_mul(k, G0)
    for m in range(1, 21):
        Q = mul_via_division_polys(m, P)
        R = scalar_mul(m, P)
        assert Q.x == R.x
        assert Q.y == R.y


def test_nonvanishing_on_E0():
    t = DivisionPolynomials(E0)
    for k in range(1, 6):
        P = scalar_mul(k, G0)
        for m in range(1, 21):
            assert t.psi(m).evaluate(P) != 0


def test_torsion_denominator():
    # (0, 0) is 2-torsion on y^2 = x^3 - x
    T = Curve(-1, 0).point(0, 0)
    with pytest.raises(TorsionDenominator):
        mul_via_division_polys(2, T)
    assert mul_via_division_polys(3, T) == T
