"""Exact integer-lattice toolkit.

Bases, Gram matrices and determinants stay in exact integers (python-flint).
Successive minima come from exact Fincke-Pohst enumeration over an LLL
pre-conditioned basis. The enumeration radius is the longest reduced basis
vector, which bounds lambda_r because those vectors are independent.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import flint

from .errors import (
    AllTorsion, BadParams, BudgetExceeded, CertificateViolation, NotSquare, SearchExhausted,
)

ENUM_BUDGET = 2_000_000
MAX_RANK = 6
HABEGGER_MAX_N = 4
REL_FUZZ = 1e-12

Row = tuple


def _mat(rows: Sequence[Sequence[int]]) -> flint.fmpz_mat:
    return flint.fmpz_mat([list(map(int, r)) for r in rows])


def _tolist(M: flint.fmpz_mat) -> list:
    return [tuple(int(v) for v in row) for row in M.tolist()]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def norm_sq(u: Sequence[int]) -> int:
    return dot(u, u)


def gram(rows: Sequence[Sequence[int]]) -> list:
    return [[dot(a, b) for b in rows] for a in rows]


def int_det(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 1
    return int(_mat(rows).det())


def rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    return int(_mat(rows).rank())


def unit_ball_volume(r: int) -> float:
    """omega_r = pi^(r/2) / Gamma(r/2 + 1), via its rational * pi^k closed form."""
    k = r // 2
    if r % 2 == 0:
        return math.pi**k / math.factorial(k)
    return 2 * math.factorial(k) * (4 * math.pi) ** k / math.factorial(r)


@dataclass(frozen=True)
class SuccessiveMinima:
    norms_sq: tuple
    vectors: tuple

    @property
    def values(self) -> tuple:
        return tuple(math.sqrt(n) for n in self.norms_sq)

    def to_dict(self) -> dict:
        return {"norms_sq": list(self.norms_sq), "minima": [repr(v) for v in self.values],
                "vectors": [list(v) for v in self.vectors]}


@dataclass(frozen=True)
class IntegerLattice:
    """Lattice spanned by the rows of `basis` in Z^N; rows must be independent."""

    basis: tuple
    _minima: list = field(default_factory=list, init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.basis)
        if not rows:
            raise BadParams("empty basis")
        if len({len(r) for r in rows}) != 1:
            raise BadParams("ragged basis")
        if rank(rows) != len(rows):
            raise BadParams("basis rows are linearly dependent")
        object.__setattr__(self, "basis", rows)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.basis[0])

    @property
    def det_squared(self) -> int:
        return int_det(gram(self.basis))

    @property
    def det(self) -> float:
        return math.sqrt(self.det_squared)

    def minima(self, budget: int = ENUM_BUDGET) -> SuccessiveMinima:
        if not self._minima:
            self._minima.append(successive_minima(self, budget))
        return self._minima[0]

    def to_dict(self) -> dict:
        return {"basis": [list(r) for r in self.basis], "rank": self.rank,
                "det_squared": self.det_squared}


def lll_basis(rows: Sequence[Sequence[int]]) -> list:
    return [r for r in _tolist(_mat(rows).lll()) if any(r)]


def _gso(G: list) -> tuple:
    """Exact Gram-Schmidt data (mu, Bstar) from a Gram matrix."""
    r = len(G)
    mu = [[Fraction(0)] * r for _ in range(r)]
    bstar = [Fraction(0)] * r
    for i in range(r):
        for j in range(i):
            s = Fraction(G[i][j]) - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(j))
            mu[i][j] = s / bstar[j]
        bstar[i] = G[i][i] - sum(mu[i][k] ** 2 * bstar[k] for k in range(i))
    return mu, bstar


def enumerate_short(rows: Sequence[Sequence[int]], bound_sq: int, budget: int = ENUM_BUDGET) -> list:
    """All nonzero lattice vectors v (up to sign) with |v|^2 <= bound_sq.

    Exact Fincke-Pohst over the given basis. Returns (norm_sq, vector)
    sorted by norm then lexicographically, with sign fixed so that the first
    nonzero entry is positive.
    """
    r, n = len(rows), len(rows[0])
    mu, bstar = _gso(gram(rows))
    coeffs = [0] * r
    out = []
    visited = 0

    def rec(i: int, remaining: Fraction):
        nonlocal visited
        if i < 0:
            if any(coeffs):
                v = tuple(sum(coeffs[k] * rows[k][t] for k in range(r)) for t in range(n))
                out.append(v)
            return
        centre = -sum(mu[k][i] * coeffs[k] for k in range(i + 1, r))
        t = remaining / bstar[i]
        rad = math.isqrt(math.floor(t)) + 1
        base = math.floor(centre)
        for c in range(base - rad, base + rad + 2):
            d = (c - centre) ** 2
            if d > t:
                continue
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"enumeration exceeded {budget} nodes")
            coeffs[i] = c
            rec(i - 1, remaining - d * bstar[i])
        coeffs[i] = 0

    rec(r - 1, Fraction(bound_sq))
    seen = {}
    for v in out:
        s = _sign_normalize(v)
        seen[s] = norm_sq(s)
    return sorted(((q, v) for v, q in seen.items()), key=lambda qv: (qv[0], qv[1]))


def _sign_normalize(v: Sequence[int]) -> tuple:
    for a in v:
        if a:
            return tuple(v) if a > 0 else tuple(-b for b in v)
    return tuple(v)


def successive_minima(L: IntegerLattice, budget: int = ENUM_BUDGET) -> SuccessiveMinima:
    """Exact lambda_1..lambda_r with independent achieving vectors.

    Greedy selection in increasing norm order (ties lexicographic) is exact
    for successive minima.
    """
    if L.rank > MAX_RANK:
        raise BudgetExceeded(f"rank {L.rank} > {MAX_RANK}")
    red = lll_basis(L.basis)
    radius_sq = max(norm_sq(b) for b in red)
    chosen = []
    norms = []
    for q, v in enumerate_short(red, radius_sq, budget):
        if rank(chosen + [v]) > len(chosen):
            chosen.append(v)
            norms.append(q)
            if len(chosen) == L.rank:
                break
    if len(chosen) != L.rank:
        raise CertificateViolation("enumeration did not reach full rank")
    return SuccessiveMinima(tuple(norms), tuple(chosen))


def det_lattice(L: IntegerLattice) -> float:
    return L.det


def _integer_kernel(rows: Sequence[Sequence[int]]) -> list:
    """Basis of {x in Z^N : x.v = 0 for all rows v}, via HNF of [M^t | I]."""
    r, n = len(rows), len(rows[0])
    aug = [[rows[i][k] for i in range(r)] + [1 if t == k else 0 for t in range(n)] for k in range(n)]
    H = _tolist(_mat(aug).hnf())
    return [h[r:] for h in H if not any(h[:r]) and any(h[r:])]


def minima_basis(L: IntegerLattice, budget: int = ENUM_BUDGET) -> Optional[list]:
    """A basis of L whose i-th vector has norm lambda_i, or None if none exists.

    Such a basis always exists in rank <= 4; the search backtracks over all
    vectors of the right norms.
    """
    mins = L.minima(budget)
    target = L.det_squared
    by_norm = {}
    for q, v in enumerate_short(lll_basis(L.basis), max(mins.norms_sq), budget):
        by_norm.setdefault(q, []).append(v)

    def dfs(i: int, chosen: list) -> Optional[list]:
        if i == L.rank:
            return chosen if int_det(gram(chosen)) == target else None
        for v in by_norm.get(mins.norms_sq[i], []):
            if rank(chosen + [v]) == i + 1:
                got = dfs(i + 1, chosen + [v])
                if got:
                    return got
        return None

    return dfs(0, [])


def orthogonal_lattice(L: IntegerLattice, budget: int = ENUM_BUDGET) -> IntegerLattice:
    """Lambda-perp, with a basis realizing its successive minima when one exists."""
    if L.rank >= L.ambient_dim:
        raise BadParams("orthogonal lattice needs rank < ambient dimension")
    K = IntegerLattice(tuple(_integer_kernel(L.basis)))
    better = minima_basis(K, budget)
    return IntegerLattice(tuple(better)) if better else IntegerLattice(tuple(lll_basis(K.basis)))


def stacked_determinant_check(L: IntegerLattice, Lperp: IntegerLattice) -> tuple:
    """(det(U)^2, det(L)^2 det(Lperp)^2) for U stacking both bases; equal iff the identity holds."""
    U = list(L.basis) + list(Lperp.basis)
    return int_det(U) ** 2, L.det_squared * Lperp.det_squared


def adjugate(M: Sequence[Sequence[int]]) -> list:
    """Transpose of the cofactor matrix."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise NotSquare(f"{n} rows with lengths {[len(r) for r in M]}")
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i, j in itertools.product(range(n), repeat=2):
        minor = [[M[a][b] for b in range(n) if b != j] for a in range(n) if a != i]
        adj[j][i] = (-1) ** (i + j) * int_det(minor)
    return adj


def adjugate_column_bound_holds(M: Sequence[Sequence[int]], adj: Sequence[Sequence[int]]) -> bool:
    """Entries of column i of adj(M) are bounded by prod_{k != i} |row_k| (compared squared).

    That is prod|rows| / |row_i| when row i is nonzero.
    """
    sq = [norm_sq(r) for r in M]
    for i in range(len(M)):
        bound = math.prod(q for k, q in enumerate(sq) if k != i)
        if any(row[i] ** 2 > bound for row in adj):
            return False
    return True


@dataclass(frozen=True)
class MinkowskiCertificate:
    lower: float
    middle: float
    upper: float

    def to_dict(self) -> dict:
        return {"lower": repr(self.lower), "middle": repr(self.middle), "upper": repr(self.upper)}


def minkowski_certificate(L: IntegerLattice, budget: int = ENUM_BUDGET) -> MinkowskiCertificate:
    """(2^r/r!) det <= omega_r prod(lambda_i) <= 2^r det."""
    r = L.rank
    d = L.det
    mins = L.minima(budget)
    cert = MinkowskiCertificate(
        lower=2**r / math.factorial(r) * d,
        middle=unit_ball_volume(r) * math.prod(mins.values),
        upper=2**r * d,
    )
    fuzz = REL_FUZZ * cert.upper
    if not (cert.lower <= cert.middle + fuzz and cert.middle <= cert.upper + fuzz):
        raise CertificateViolation(f"Minkowski fails on {L.basis}: {cert}")
    return cert


def c16(N: int, m: int) -> Fraction:
    return Fraction(m**3 * math.factorial(m) ** 4 * N, 4 ** (m - 1))


def c17(N: int, m: int) -> float:
    return math.sqrt(math.comb(m + N, N)) * 4**N / unit_ball_volume(N)


@dataclass(frozen=True)
class LinearFormSystem:
    """m real linear forms in N variables, each of euclidean norm at most 1.

    `coeffs[j]` holds the coefficients of L_j. The rank-1 construction keeps
    its inputs (integer v, generator heights, A) for auditing.
    """

    coeffs: tuple
    v: Optional[tuple] = None
    gen_heights: Optional[tuple] = None
    A: Optional[float] = None
    c16: Optional[Fraction] = None

    def __post_init__(self):
        rows = tuple(tuple(float(c) for c in r) for r in self.coeffs)
        object.__setattr__(self, "coeffs", rows)
        if not rows or len({len(r) for r in rows}) != 1:
            raise ValueError("need m >= 1 forms of equal length")
        for j in range(len(rows)):
            if self.norm(j) > 1 + REL_FUZZ:
                raise ValueError(f"|L_{j + 1}| = {self.norm(j)} > 1")

    @property
    def N(self) -> int:
        return len(self.coeffs[0])

    @property
    def m(self) -> int:
        return len(self.coeffs)

    def norm(self, j: int) -> float:
        return math.sqrt(sum(c * c for c in self.coeffs[j]))

    def evaluate(self, j: int, u: Sequence[int]) -> float:
        return sum(c * a for c, a in zip(self.coeffs[j], u))

    def to_dict(self) -> dict:
        return {"N": self.N, "m": self.m, "coeffs": [[repr(c) for c in r] for r in self.coeffs],
                "norms": [repr(self.norm(j)) for j in range(self.m)],
                "A": None if self.A is None else repr(self.A),
                "c16": None if self.c16 is None else str(self.c16)}


def rank1_linear_forms(v: Sequence[Sequence[int]], gen_heights: Sequence[float]) -> LinearFormSystem:
    """Forms L_j = (hhat(g_j) / (N A))^(1/2) sum_i v_ij X_i with A = max v_ij^2 hhat(g_j).

    `v` is N x m: row i lists the coefficients of P_i on the generators g_j.
    """
    N, m = len(v), len(gen_heights)
    if any(len(row) != m for row in v):
        raise ValueError(f"v must be {N} x {m}")
    if any(h < 0 for h in gen_heights):
        raise ValueError("generator heights must be nonnegative")
    A = max(v[i][j] ** 2 * gen_heights[j] for i in range(N) for j in range(m))
    if A == 0:
        raise AllTorsion("every v_ij hhat(g_j) vanishes")
    coeffs = []
    for j in range(m):
        scale = math.sqrt(gen_heights[j] / (N * A))
        coeffs.append(tuple(scale * v[i][j] for i in range(N)))
    return LinearFormSystem(tuple(coeffs), tuple(map(tuple, v)), tuple(gen_heights), A, c16(N, m))


@dataclass(frozen=True)
class HabeggerCertificate:
    vectors: tuple
    T: float
    s: int
    c17: float
    product: float
    rhs: float
    checks: tuple  # (j, k, lhs) with 1-based indices

    @property
    def holds(self) -> bool:
        fuzz = REL_FUZZ * max(1.0, self.rhs)
        return self.product <= self.T * (1 + REL_FUZZ) and all(l <= self.rhs + fuzz for _, _, l in self.checks)

    def to_dict(self) -> dict:
        return {"vectors": [list(u) for u in self.vectors], "T": repr(self.T), "s": self.s,
                "c17": repr(self.c17), "product": repr(self.product), "rhs": repr(self.rhs),
                "checks": [{"j": j, "k": k, "lhs": repr(l)} for j, k, l in self.checks],
                "holds": self.holds}


def _certify(forms: LinearFormSystem, us: Sequence[tuple], T: float, s: int) -> HabeggerCertificate:
    N, m = forms.N, forms.m
    norms = [math.sqrt(norm_sq(u)) for u in us]
    prod = math.prod(norms)
    k17 = c17(N, m)
    rhs = k17 * T ** (1 - N / (m * s))
    checks = tuple(
        (j + 1, k + 1, prod * abs(forms.evaluate(j, u)) / norms[k])
        for j in range(m) for k, u in enumerate(us)
    )
    return HabeggerCertificate(tuple(us), T, s, k17, prod, rhs, checks)


def habegger_vectors(forms: LinearFormSystem, T: float, s: int,
                     budget: int = ENUM_BUDGET) -> HabeggerCertificate:
    """Independent u_1..u_s in Z^N with prod|u_k| <= T and every
    prod|u| |L_j(u_k)| / |u_k| <= c17(N,m) T^(1 - N/(ms)).

    Certified search: primitive vectors with |u| <= T, ordered by
    (max_j |L_j(u)|/|u|, |u|^2, lexicographic), explored depth-first.
    """
    N = forms.N
    if N > HABEGGER_MAX_N:
        raise BudgetExceeded(f"N = {N} > {HABEGGER_MAX_N}")
    if not 1 <= s <= N:
        raise ValueError("s must lie in 1..N")
    if T < 1:
        raise ValueError("T must be at least 1")
    R = math.floor(T)
    cands = []
    for q, u in enumerate_short([tuple(int(i == k) for i in range(N)) for k in range(N)], R * R, budget):
        if math.gcd(*u) != 1:
            continue
        ratio = max(abs(forms.evaluate(j, u)) for j in range(forms.m)) / math.sqrt(q)
        cands.append((ratio, q, u))
    cands.sort()
    visited = 0

    def dfs(start: int, chosen: list, prod_sq: int) -> Optional[HabeggerCertificate]:
        nonlocal visited
        if len(chosen) == s:
            cert = _certify(forms, chosen, T, s)
            return cert if cert.holds else None
        for idx in range(start, len(cands)):
            _, q, u = cands[idx]
            if prod_sq * q > T * T * (1 + REL_FUZZ):
                continue
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"Habegger search exceeded {budget} nodes")
            if rank(chosen + [u]) == len(chosen) + 1:
                got = dfs(idx + 1, chosen + [u], prod_sq * q)
                if got:
                    return got
        return None

    found = dfs(0, [], 1)
    if found is None:
        raise SearchExhausted(f"no certified {s}-tuple with T = {T}")
    return found
