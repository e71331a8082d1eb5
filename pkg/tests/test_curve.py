import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ecbounds.curve import (
    E0, G0, Curve, Point, add, neg, new_curve, parse_point, scalar_mul, serialize_point,
)
from ecbounds.errors import CurveMismatch, NotOnCurve, SingularCurve

MULTIPLES = {k: scalar_mul(k, G0) for k in range(-6, 7)}

# y^2 = x^3 - 2 has rank 1 with P = (3, 5); y^2 = x^3 - 25x (congruent number 5) has (-4, 6).
OTHER = [Curve(0, -2).point(3, 5), Curve(-25, 0).point(-4, 6)]


def test_new_curve_E0():
    E = new_curve(1, -1)
    assert E.delta == -496
    assert E.j == Fraction(6912, 31)


def test_new_curve_singular():
    with pytest.raises(SingularCurve):
        new_curve(0, 0)


def test_new_curve_1728():
    E = new_curve(-1, 0)
    assert E.delta == 64
    assert E.j == 1728


def test_j_delta_invariant():
    for A, B in [(1, -1), (-1, 0), (2, 3), (-7, 10), (0, 5)]:
        E = new_curve(A, B)
        assert E.j * E.delta == -1728 * (4 * A) ** 3


def test_doubling_generator():
    # tangent slope at (1,1) is (3+1)/2 = 2, x3 = 4 - 2 = 2, y3 = 2(1-2) - 1 = -3
    P = add(G0, G0)
    assert (P.x, P.y) == (2, -3)
    assert (-3) ** 2 == 2**3 + 2 - 1


def test_identity_and_inverse():
    assert add(G0, E0.identity) == G0
    assert add(E0.identity, G0) == G0
    assert add(G0, neg(G0)).is_identity


def test_neg_examples():
    assert (neg(G0).x, neg(G0).y) == (1, -1)
    assert neg(E0.identity).is_identity
    assert neg(E0.point(2, -3)) == E0.point(2, 3)


def test_scalar_mul_examples():
    assert scalar_mul(0, G0).is_identity
    assert scalar_mul(1, G0) == G0
    assert scalar_mul(3, G0) == add(add(G0, G0), G0)
    assert scalar_mul(-3, G0) == neg(scalar_mul(3, G0))


def test_curve_mismatch():
    with pytest.raises(CurveMismatch):
        add(G0, OTHER[0])


def test_not_on_curve():
    with pytest.raises(NotOnCurve):
        E0.point(1, 2)


@pytest.mark.parametrize("a,b,c", list(itertools.product(range(-6, 7), repeat=3)))
def test_group_law_exhaustive_small(a, b, c):
    P, Q, R = MULTIPLES[a], MULTIPLES[b], MULTIPLES[c]
    assert add(P, Q) == add(Q, P)
    assert add(add(P, Q), R) == add(P, add(Q, R))


@pytest.mark.parametrize("P", OTHER)
def test_group_law_other_curves(P):
    mult = [scalar_mul(k, P) for k in range(-3, 4)]
    for X, Y, Z in itertools.product(mult, repeat=3):
        assert add(add(X, Y), Z) == add(X, add(Y, Z))
        assert add(X, Y) == add(Y, X)


@given(st.integers(-10, 10), st.integers(-10, 10))
def test_scalar_mul_additive(m, n):
    assert scalar_mul(m + n, G0) == add(scalar_mul(m, G0), scalar_mul(n, G0))


@given(st.integers(-15, 15))
def test_closure_on_curve(k):
    P = scalar_mul(k, G0)
    assert P.is_identity or E0.contains(P.x, P.y)


def test_serialization_round_trip():
    for k in range(-4, 5):
        P = scalar_mul(k, G0)
        assert parse_point(serialize_point(P), E0) == P
    assert serialize_point(E0.identity) == "O"
    assert serialize_point(G0) == "1/1,1/1"
    assert parse_point("1,1", E0) == G0
