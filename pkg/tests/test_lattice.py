import itertools
import math

import flint
import pytest
import sympy as sp
from hypothesis import HealthCheck, given, settings, strategies as st

from ecbounds.curve import G0, scalar_mul
from ecbounds.errors import AllTorsion, NotSquare
from ecbounds.heights import canonical_height_product, neron_tate
from ecbounds.lattice import (
    IntegerLattice, LinearFormSystem, adjugate, adjugate_column_bound_holds, c16, c17, det_lattice,
    habegger_vectors, int_det, minkowski_certificate, norm_sq, orthogonal_lattice, rank,
    rank1_linear_forms, stacked_determinant_check, successive_minima, unit_ball_volume,
)


def full_rank_rows(max_rank=4, max_dim=5, lo=-20, hi=20):
    @st.composite
    def build(draw):
        r = draw(st.integers(1, max_rank))
        n = draw(st.integers(r, max_dim))
        rows = draw(st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=r, max_size=r))
        return rows

    return build().filter(lambda rows: rank(rows) == len(rows))


def in_lattice(x, basis):
    """Oracle membership test: HNF unchanged when x is appended."""
    H = flint.fmpz_mat(basis).hnf()
    H2 = flint.fmpz_mat(list(map(list, basis)) + [list(x)]).hnf()
    return H.tolist() == [r for r in H2.tolist() if any(r)]


def oracle_minima(basis):
    """Scan integer vectors of the ambient space by norm and select greedily."""
    n = len(basis[0])
    R2 = max(norm_sq(b) for b in basis)
    R = math.isqrt(R2)
    pts = [x for x in itertools.product(range(-R, R + 1), repeat=n) if 0 < norm_sq(x) <= R2]
    pts.sort(key=norm_sq)
    chosen, norms = [], []
    for x in pts:
        if rank(chosen + [x]) > len(chosen) and in_lattice(x, basis):
            chosen.append(x)
            norms.append(norm_sq(x))
    return tuple(norms)


# successive minima and determinants

def test_minima_examples():
    assert successive_minima(IntegerLattice([[1, 0], [0, 1]])).values == (1.0, 1.0)
    assert successive_minima(IntegerLattice([[2, 0], [0, 3]])).values == (2.0, 3.0)
    m = successive_minima(IntegerLattice([[1, 1], [1, -1]]))
    assert m.norms_sq == (2, 2)


def test_det_examples():
    assert det_lattice(IntegerLattice([[1, 0], [0, 1]])) == 1.0
    assert det_lattice(IntegerLattice([[1, 1], [1, -1]])) == 2.0
    assert det_lattice(IntegerLattice([[3, 4]])) == 5.0


@settings(max_examples=40, deadline=None)
@given(full_rank_rows(max_rank=3, max_dim=3, lo=-4, hi=4))
def test_minima_against_ambient_scan(rows):
    assert successive_minima(IntegerLattice(rows)).norms_sq == oracle_minima(rows)


@settings(max_examples=100, deadline=None)
@given(full_rank_rows())
def test_det_against_sympy_gram(rows):
    M = sp.Matrix(rows)
    assert IntegerLattice(rows).det_squared == (M * M.T).det()


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(full_rank_rows())
def test_minkowski_random(rows):
    L = IntegerLattice(rows)
    c = minkowski_certificate(L)
    assert c.lower <= c.middle * (1 + 1e-12) and c.middle <= c.upper * (1 + 1e-12)
    mins = L.minima()
    assert list(mins.norms_sq) == sorted(mins.norms_sq)
    assert rank(list(mins.vectors)) == L.rank
    assert [norm_sq(v) for v in mins.vectors] == list(mins.norms_sq)
    assert all(in_lattice(v, rows) for v in mins.vectors)


def test_minkowski_examples():
    c = minkowski_certificate(IntegerLattice([[1]]))
    assert (c.lower, c.middle, c.upper) == (2.0, 2.0, 2.0)
    c = minkowski_certificate(IntegerLattice([[1, 0], [0, 1]]))
    assert (c.lower, c.middle, c.upper) == (2.0, math.pi, 4.0)
    c = minkowski_certificate(IntegerLattice([[1, 1], [1, -1]]))
    assert c.lower == 4.0 and c.middle == pytest.approx(2 * math.pi) and c.upper == 8.0


def test_unit_ball_volume():
    for r in range(1, 8):
        exact = sp.pi ** sp.Rational(r, 2) / sp.gamma(sp.Rational(r, 2) + 1)
        assert unit_ball_volume(r) == pytest.approx(float(exact), rel=1e-14)


# orthogonal lattice

def test_orthogonal_examples():
    P = orthogonal_lattice(IntegerLattice([[1, 1, 1]]))
    assert P.rank == 2 and P.det_squared == 3
    assert orthogonal_lattice(IntegerLattice([[1, 0]])).basis == ((0, 1),)
    assert orthogonal_lattice(IntegerLattice([[1, 0, 0], [0, 1, 0]])).basis == ((0, 0, 1),)


def primitive_rows():
    @st.composite
    def build(draw):
        n = draw(st.integers(2, 5))
        r = draw(st.integers(1, n - 1))
        return draw(st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=r, max_size=r))

    def primitive(rows):
        if rank(rows) != len(rows):
            return False
        # saturated: gcd of maximal minors is 1
        g = 0
        for cols in itertools.combinations(range(len(rows[0])), len(rows)):
            g = math.gcd(g, int_det([[row[c] for c in cols] for row in rows]))
        return g == 1

    return build().filter(primitive)


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(primitive_rows())
def test_orthogonal_random(rows):
    L = IntegerLattice(rows)
    P = orthogonal_lattice(L)
    assert P.rank == L.ambient_dim - L.rank
    assert all(sum(a * b for a, b in zip(u, v)) == 0 for u in P.basis for v in L.basis)
    lhs, rhs = stacked_determinant_check(L, P)
    assert lhs == rhs
    # primitive L: Lambda-perp has the same covolume
    assert P.det_squared == L.det_squared
    # the basis realizes the successive minima
    assert sorted(norm_sq(b) for b in P.basis) == list(P.minima().norms_sq)


# adjugate

def test_adjugate_examples():
    I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert adjugate(I3) == I3
    a, b, c, d = 3, -5, 7, 2
    assert adjugate([[a, b], [c, d]]) == [[d, -b], [-c, a]]
    with pytest.raises(NotSquare):
        adjugate([[1, 2, 3], [4, 5, 6]])


square = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=100, deadline=None)
@given(square)
def test_adjugate_random(M):
    adj = adjugate(M)
    S = sp.Matrix(M)
    assert sp.Matrix(adj) == S.adjugate()
    assert S * sp.Matrix(adj) == S.det() * sp.eye(len(M))
    assert adjugate_column_bound_holds(M, adj)


# linear forms and Habegger vectors

def test_rank1_forms_examples():
    F = rank1_linear_forms([[1], [2]], [0.25])
    assert F.A == 1.0
    assert F.coeffs[0] == pytest.approx((math.sqrt(1 / 8), 2 * math.sqrt(1 / 8)))
    assert F.norm(0) == pytest.approx(math.sqrt(5 / 8))
    F3 = rank1_linear_forms([[1], [0], [0]], [0.7])
    assert F3.coeffs[0] == pytest.approx((1 / math.sqrt(3), 0, 0))
    assert c16(3, 1) == 3


def test_all_torsion():
    with pytest.raises(AllTorsion):
        rank1_linear_forms([[0], [0]], [0.25])


def test_c17_value():
    assert c17(2, 1) == pytest.approx(math.sqrt(3) * 16 / math.pi)


def test_habegger_examples():
    cert = habegger_vectors(LinearFormSystem(((1.0, 0.0),)), 1, 1)
    assert cert.vectors == ((0, 1),)
    assert cert.checks[0][2] == 0.0 and cert.holds
    zero = habegger_vectors(LinearFormSystem(((0.0, 0.0, 0.0),)), 5, 1)
    assert norm_sq(zero.vectors[0]) == 1
    F = rank1_linear_forms([[1], [2]], [0.25])
    cert = habegger_vectors(F, 4, 2)
    assert rank(list(cert.vectors)) == 2 and cert.product <= 4 and cert.holds


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3).flatmap(lambda N: st.tuples(
    st.lists(st.integers(-6, 6), min_size=N, max_size=N).filter(any),
    st.sampled_from([1, 4, 16]),
    st.integers(1, N))))
def test_habegger_random(cfg):
    v, T, s = cfg
    F = rank1_linear_forms([[a] for a in v], [0.1258])
    cert = habegger_vectors(F, T, s)
    assert cert.holds
    assert rank(list(cert.vectors)) == s
    assert all(math.gcd(*u) == 1 for u in cert.vectors)


HG = neron_tate(G0, 1e-4)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=2, max_size=3).filter(any),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_lemma71_end_to_end(v, t):
    N = len(v)
    t = t[:N]
    P = [scalar_mul(a, G0) for a in v]
    F = rank1_linear_forms([[a] for a in v], [HG.mid])
    combo = G0.curve.identity
    for ti, Pi in zip(t, P):
        combo = combo + scalar_mul(ti, Pi)
    lhs = neron_tate(combo, 1e-2)
    hp = canonical_height_product(P, 1e-2)
    rhs_hi = float(c16(N, 1)) * F.evaluate(0, t) ** 2 * hp.hi
    assert lhs.lo <= rhs_hi + 1e-9
