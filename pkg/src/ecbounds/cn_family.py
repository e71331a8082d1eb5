"""The curves C_n : x_1^n = y_2 inside E0^2, with E0 : y^2 = x^3 + x - 1.

E0(Q) is taken to be Z g with g = (1, 1) (rank 1, trivial torsion); that is
a fixture, not recomputed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import gmpy2
import sympy as sp

from .bounds import (
    LOG2, LOG3, TRANSVERSE_E2, BoundCertificate, ChowClass, chow_product, exact, fmt, numeric,
    theorem14_bound,
)
from .curve import E0, G0, Point, scalar_mul
from .errors import BadParams
from .heights import HeightInterval, neron_tate

# published uniform constants, compared against (never used as inputs to the exact chain)
PUBLISHED_POINT_CONST = sp.Integer(8253) * sp.Integer(10) ** 35  # 8.253e38
PUBLISHED_A_CONST = sp.Integer(7037) * sp.Integer(10) ** 16  # 7.037e19
HG_LOWER = sp.Rational(1, 4)


def _n(n: int):
    if not isinstance(n, int) or n < 1:
        raise BadParams(f"n must be an integer >= 1, got {n}")


def cn_degree(n: int) -> int:
    """(n l + m)(3 l)(3 m)(l + m) in the Chow ring of P_2 x P_2."""
    _n(n)
    classes = [ChowClass.linear([n, 1]), ChowClass.linear([3, 0]),
               ChowClass.linear([0, 3]), ChowClass.linear([1, 1])]
    return chow_product(classes, 2)


@dataclass(frozen=True)
class Fiber:
    branch_point: str
    ramified: int  # preimages of index `index`
    index: int
    unramified: int

    @property
    def contribution(self) -> int:
        return self.ramified * (self.index - 1)

    @property
    def size(self) -> int:
        """Sum of e_P over the fiber; equals deg pi_n."""
        return self.ramified * self.index + self.unramified

    def to_dict(self) -> dict:
        return {"branch_point": self.branch_point, "ramified": self.ramified, "index": self.index,
                "unramified": self.unramified, "sum(e_P-1)": self.contribution}


def cn_genus(n: int) -> tuple:
    """(genus, fibers) from Hurwitz for pi_n = y_2 : C_n -> P^1 of degree 6n."""
    _n(n)
    fibers = [Fiber(f"beta_{i}", 2 * n, 2, 2 * n) for i in range(1, 5)]
    fibers.append(Fiber("0", 6, n, 0))
    fibers += [Fiber(f"alpha_{i}^n", 3, 2, 6 * n - 6) for i in range(1, 4)]
    fibers.append(Fiber("infinity", 1, 6 * n, 0))
    deg = 6 * n
    if any(f.size != deg for f in fibers):
        raise AssertionError("fiber sizes disagree with deg pi_n")
    ram = sum(f.contribution for f in fibers)
    two_minus_2g = 2 * deg - ram
    if two_minus_2g % 2:
        raise AssertionError("odd Euler characteristic")
    return (2 - two_minus_2g) // 2, fibers


def cn_essential_min_bound(n: int) -> tuple:
    """Upper bound log3 (4n+3)/(2n) for mu(C_n), and the height chain behind it.

    The chain bounds the points Q_zeta = ((x_1, y_1), (zeta, y_2)) with zeta a
    root of unity.
    """
    _n(n)
    half = LOG3 / 2
    chain = {
        "h(y2)": half,
        "h(x1)": LOG3 / (2 * n),
        "h(y1)": LOG3 / n + half,
        "h(x1,y1)": LOG3 * sp.Rational(n + 3, 2 * n),
        "h(zeta,y2)": half,
        "h2(x1,y1)": LOG3 * sp.Rational(2 * n + 3, 2 * n),
        "h2(zeta,y2)": LOG3,
    }
    mu = chain["h2(x1,y1)"] + chain["h2(zeta,y2)"]
    chain["h2(Q_zeta)"] = mu
    return mu, chain


def cn_curve_height_bound(n: int) -> sp.Expr:
    """Zhang: h(C_n) <= 2 deg(C_n) mu(C_n)."""
    return 2 * cn_degree(n) * cn_essential_min_bound(n)[0]


def cn_point_height_bound(n: int) -> BoundCertificate:
    """hhat(P) for P in C_n(Q), evaluated exactly and compared with 8.253e38 (n+1)^3."""
    hC = cn_curve_height_bound(n)
    cert = theorem14_bound(E0, TRANSVERSE_E2, hC, cn_degree(n))
    cert.formula = "cn_point_height"
    cert.inputs = {"n": n}
    cert.anchor = "height of rational points on C_n"
    cert.intermediates["h(C_n) upper"] = hC
    cert.comparisons["value <= 8.253e38 (n+1)^3"] = (cert.value, PUBLISHED_POINT_CONST * (n + 1) ** 3)
    return cert


def a_max_from_point_bound(n: int, point_bound: sp.Expr, hg_lower: sp.Expr = HG_LOWER) -> sp.Expr:
    """Largest |a| allowed by (2n/3 + 1) a^2 hhat(g) <= hhat(P) + 2 log 2 + 5n/3."""
    return sp.sqrt((point_bound + 2 * LOG2 + sp.Rational(5 * n, 3)) / ((sp.Rational(2 * n, 3) + 1) * hg_lower))


@dataclass(frozen=True)
class CoeffBounds:
    n: int
    a_max: sp.Expr  # from the uniform 8.253e38 (n+1)^3 bound
    a_max_exact: sp.Expr  # from this n's exact point bound
    b_coeff: sp.Expr  # |b|^2 <= b_coeff a^2 + b_const
    b_const: sp.Expr

    def b_max(self, a: int) -> sp.Expr:
        return sp.sqrt(self.b_coeff * a * a + self.b_const)

    def to_dict(self) -> dict:
        return {"n": self.n,
                "a_max": {"exact": sp.sstr(self.a_max), "approx": fmt(self.a_max)},
                "a_max_exact": {"exact": sp.sstr(self.a_max_exact), "approx": fmt(self.a_max_exact)},
                "b_params": [sp.sstr(self.b_coeff), sp.sstr(self.b_const)]}


def cn_coeff_bounds(n: int) -> CoeffBounds:
    _n(n)
    uniform = PUBLISHED_POINT_CONST * (n + 1) ** 3
    exact_pb = cn_point_height_bound(n).value
    return CoeffBounds(
        n,
        a_max=a_max_from_point_bound(n, uniform),
        a_max_exact=a_max_from_point_bound(n, exact_pb),
        b_coeff=sp.Rational(3 * n, 2),
        b_const=14 * LOG2 + 10,
    )


def cn_membership(a: int, b: int, n: int) -> bool:
    """x([a]g)^n == y([b]g); pairs involving the identity are not on the affine curve."""
    P, Q = scalar_mul(a, G0), scalar_mul(b, G0)
    if P.is_identity or Q.is_identity:
        return False
    return P.x**n == Q.y


def _rational_x_with_y(t: Fraction) -> Optional[Fraction]:
    """The rational x with x^3 + x - 1 = t^2, if any.

    Writing t = u/e^3 (lowest terms) forces x = p/e^2 with p an integer root
    of p^3 + e^4 p - (e^6 + u^2), which is strictly increasing in p and
    negative at 0.
    """
    u, den = t.numerator, t.denominator
    e, is_cube = gmpy2.iroot(gmpy2.mpz(den), 3)
    if not is_cube:
        return None
    e = int(e)
    K = e**6 + u * u
    lo, hi = 0, int(gmpy2.iroot(gmpy2.mpz(K), 3)[0]) + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**3 + e**4 * mid - K < 0:
            lo = mid + 1
        else:
            hi = mid
    if lo**3 + e**4 * lo != K:
        return None
    return Fraction(lo, e * e)


@dataclass(frozen=True)
class SearchHit:
    a: int
    b: int
    x1: Fraction
    y2: Fraction

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "x1": str(self.x1), "y2": str(self.y2)}


def _multiples(radius: int) -> dict:
    return {k: scalar_mul(k, G0) for k in range(-radius, radius + 1)}


def cn_search(n: int, radius: int) -> list:
    """All (a, b) with 0 < |a|, |b| <= radius and ([a]g, [b]g) on C_n, sorted."""
    _n(n)
    mult = _multiples(radius)
    by_coords = {(P.x, P.y): k for k, P in mult.items() if not P.is_identity}
    hits = []
    for a in range(-radius, radius + 1):
        P = mult[a]
        if P.is_identity:
            continue
        t = P.x**n
        x = _rational_x_with_y(t)
        if x is None:
            continue
        b = by_coords.get((x, t))
        if b is not None:
            hits.append(SearchHit(a, b, P.x, t))
    hits.sort(key=lambda h: (h.a, h.b))
    return hits


def cn_search_bruteforce(n: int, radius: int) -> list:
    """The double loop the fast search must agree with."""
    _n(n)
    mult = _multiples(radius)
    out = []
    for a in range(-radius, radius + 1):
        for b in range(-radius, radius + 1):
            P, Q = mult[a], mult[b]
            if P.is_identity or Q.is_identity:
                continue
            if P.x**n == Q.y:
                out.append((a, b))
    return out


def generator_height_check(tol: float = 1e-3) -> HeightInterval:
    """Certified hhat(g); the lower bound 1/4 is expected of `.lo`."""
    return neron_tate(G0, tol)


@dataclass
class CnReport:
    n: int
    degree: int
    genus: int
    hurwitz_breakdown: list
    essential_min_upper: sp.Expr
    essential_min_chain: dict
    height_of_curve_upper: sp.Expr
    point_height_bound: BoundCertificate
    coeff_bounds: CoeffBounds

    def to_dict(self) -> dict:
        def num(v):
            return {"exact": sp.sstr(v), "approx": fmt(v)}

        return {
            "n": self.n,
            "degree": self.degree,
            "genus": self.genus,
            "hurwitz_breakdown": [f.to_dict() for f in self.hurwitz_breakdown],
            "hurwitz_sum": sum(f.contribution for f in self.hurwitz_breakdown),
            "essential_min_upper": num(self.essential_min_upper),
            "essential_min_chain": {k: num(v) for k, v in self.essential_min_chain.items()},
            "height_of_curve_upper": num(self.height_of_curve_upper),
            "point_height_bound": self.point_height_bound.to_dict(),
            "a_bound": self.coeff_bounds.to_dict(),
        }


def cn_report(n: int) -> CnReport:
    genus, fibers = cn_genus(n)
    mu, chain = cn_essential_min_bound(n)
    return CnReport(n, cn_degree(n), genus, fibers, mu, chain, cn_curve_height_bound(n),
                    cn_point_height_bound(n), cn_coeff_bounds(n))
