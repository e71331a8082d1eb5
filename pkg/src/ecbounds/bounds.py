"""Explicit constants, degree and height bounds, and their certificates.

Every constant is an exact sympy expression: a rational times a power of pi,
plus log 2, log 3 and h_W terms where the formula has them. h_W is the
symbol `HW` unless a curve or a value is supplied. Floats appear only when a
certificate is emitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import mpmath
import sympy as sp

from .curve import Curve
from .errors import AllTorsion, BadParams, CertificateViolation
from .heights import HeightInterval, neron_tate
from .lattice import (
    LinearFormSystem, habegger_vectors, norm_sq, rank1_linear_forms,
)

HW = sp.Symbol("h_W", nonnegative=True)
LOG2, LOG3 = sp.log(2), sp.log(3)
EVAL_DPS = 40
SIG_DIGITS = 15

Real = Union[int, float, Fraction, sp.Expr]


# exact inputs

def exact(x: Real) -> sp.Expr:
    """Exact sympy value; floats become their exact binary rational."""
    if isinstance(x, sp.Basic):
        return x
    if isinstance(x, Fraction):
        return sp.Rational(x.numerator, x.denominator)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise BadParams(f"non-finite input {x}")
        n, d = x.as_integer_ratio()
        return sp.Rational(n, d)
    return sp.Integer(x)


def hw_exact(curve: Curve) -> sp.Expr:
    """h_W(E) = max(log|A|/2, log|B|/3, 0) as an exact expression."""
    terms = [sp.Integer(0)]
    if curve.A:
        terms.append(sp.log(abs(curve.A)) / 2)
    if curve.B:
        terms.append(sp.log(abs(curve.B)) / 3)
    return sp.Max(*terms)


def _hw(curve: Optional[Curve], hw: Optional[Real]) -> sp.Expr:
    if curve is not None and hw is not None:
        raise BadParams("pass either a curve or an h_W value, not both")
    if curve is not None:
        return hw_exact(curve)
    if hw is not None:
        return exact(hw)
    return HW


def evalf(expr: sp.Expr, curve: Optional[Curve] = None, hw: Optional[Real] = None) -> float:
    """Float value; free h_W is bound to the curve's (or the given) value."""
    return float(numeric(expr, curve, hw))


def numeric(expr: sp.Expr, curve: Optional[Curve] = None, hw: Optional[Real] = None) -> mpmath.mpf:
    expr = sp.sympify(expr)
    if HW in expr.free_symbols:
        expr = expr.subs(HW, _hw(curve, hw) if (curve is not None or hw is not None) else HW)
    if expr.free_symbols:
        raise BadParams(f"unbound symbols {expr.free_symbols}")
    with mpmath.workdps(EVAL_DPS):
        return mpmath.mpf(sp.N(expr, EVAL_DPS))


def fmt(x) -> str:
    """15 significant digits."""
    with mpmath.workdps(EVAL_DPS):
        return mpmath.nstr(mpmath.mpf(sp.N(x, EVAL_DPS)) if isinstance(x, sp.Basic) else mpmath.mpf(x),
                           SIG_DIGITS, min_fixed=-4, max_fixed=16)


# constants

def _check(cond: bool, msg: str):
    if not cond:
        raise BadParams(msg)


def _N(N: int, least: int = 1):
    _check(isinstance(N, int) and N >= least, f"N must be an integer >= {least}, got {N}")


def _s(N: int, s: int, least: int = 1):
    _check(isinstance(s, int) and least <= s <= N, f"s must lie in {least}..{N}, got {s}")


def _m(N: int, m: int):
    _check(isinstance(m, int) and 1 <= m <= N, f"m must lie in 1..{N}, got {m}")


def omega(r: int) -> sp.Expr:
    """Volume of the unit ball in R^r."""
    _check(isinstance(r, int) and r >= 0, f"r must be a nonnegative integer, got {r}")
    return sp.gammasimp(sp.pi ** sp.Rational(r, 2) / sp.gamma(sp.Rational(r, 2) + 1))


def c1(N: int) -> sp.Expr:
    _N(N)
    return sp.Integer(3**N * math.factorial(N))


def c2(N: int, hw: Optional[Real] = None, curve: Optional[Curve] = None) -> sp.Expr:
    _N(N)
    w = _hw(curve, hw)
    return sp.Rational(N, 2) * w + sp.Rational(7 * N, 6) * LOG2


def c3(N: int, hw: Optional[Real] = None, curve: Optional[Curve] = None) -> sp.Expr:
    _N(N)
    w = _hw(curve, hw)
    return N * (3 * w + 6 * LOG2 + LOG3 / 2)


def c4(N: int, s: int) -> sp.Expr:
    _N(N)
    _s(N, s, least=0)
    return c1(N) * (sp.Rational(3, 2) * (N + 1) * sp.Integer(12) ** (N - 1)) ** s


def c5(N: int, m: int, s: int) -> sp.Expr:
    _N(N)
    _m(N, m)
    _s(N, s)
    num = (m**3 * math.factorial(m) ** 4 * math.comb(N + m, N)
           * 3 * s * N**2 * (N - s + 1) * sp.Integer(4) ** (3 * N - m + 1))
    return sp.powsimp(num / (omega(s) * omega(N - s) * omega(N)) ** 2 * c4(N, s))


def c6(N: int, s: int, hw: Optional[Real] = None, curve: Optional[Curve] = None) -> sp.Expr:
    _N(N)
    _s(N, s)
    w = _hw(curve, hw)
    return 3 * N * (N - s + 1) * (2 * LOG2 + LOG3 / 6 + w) * c4(N, s)


def c10(N: int) -> sp.Expr:
    _N(N, 2)
    return c4(N, N - 1)


def c11(N: int) -> sp.Expr:
    _N(N, 2)
    return sp.powsimp(sp.Rational(3, 2) * N**2 * (N**2 - 1) * sp.Integer(64) ** N
                      / (omega(N) * omega(N - 1)) ** 2 * c10(N))


def c12(N: int, hw: Optional[Real] = None, curve: Optional[Curve] = None) -> sp.Expr:
    _N(N, 2)
    w = _hw(curve, hw)
    return 6 * N * (w + 2 * LOG2 + LOG3 / 6) * c10(N)


def c16(N: int, m: int) -> sp.Expr:
    _N(N)
    _m(N, m)
    return sp.Rational(m**3 * math.factorial(m) ** 4 * N, 4 ** (m - 1))


def c17(N: int, m: int) -> sp.Expr:
    _N(N)
    _m(N, m)
    return sp.sqrt(math.comb(m + N, N)) * sp.Integer(4) ** N / omega(N)


def C1(N: int) -> sp.Expr:
    _N(N, 2)
    inner = (sp.Integer(3) ** (N * N + N + 1) * sp.Integer(2) ** (2 * N * N + 3 * N - 1)
             * sp.Integer(N + 1) ** (N + 1) / (omega(N) * omega(N - 1)) ** 2)
    return sp.powsimp(sp.Integer(math.factorial(N)) ** N * sp.Integer(N) ** (3 * N - 2) * inner ** (N - 1))


def C2(N: int, hw: Optional[Real] = None, curve: Optional[Curve] = None) -> sp.Expr:
    w = _hw(curve, hw)
    return C1(N) * (3**N * LOG2 / 2 + 12 * N * LOG2 + N * LOG3 + 6 * N * w)


def C3(N: int, hw: Optional[Real] = None, curve: Optional[Curve] = None) -> sp.Expr:
    _N(N, 2)
    w = _hw(curve, hw)
    return sp.Rational(7 * N * N, 6) * LOG2 + sp.Rational(N * N, 2) * w


def D1() -> sp.Expr:
    return sp.Integer(2) ** 64 * sp.Integer(3) ** 40 / sp.pi**8


def D2(hw: Optional[Real] = None, curve: Optional[Curve] = None) -> sp.Expr:
    w = _hw(curve, hw)
    return sp.Integer(2) ** 62 * sp.Integer(3) ** 41 / sp.pi**8 * (71 * LOG2 + 4 * LOG3 + 30 * w)


def D3(hw: Optional[Real] = None, curve: Optional[Curve] = None) -> sp.Expr:
    w = _hw(curve, hw)
    return sp.Rational(9, 2) * w + sp.Rational(21, 2) * LOG2


def C1_chain(N: int) -> sp.Expr:
    """C_1 as it falls out of the proof: (N/3) c10 (N c11 / (3(N-1)))^(N-1)."""
    _N(N, 3)
    return sp.powsimp(sp.Rational(N, 3) * c10(N) * (N * c11(N) / (3 * (N - 1))) ** (N - 1))


CONSTANTS: dict = {
    "omega": omega, "c1": c1, "c2": c2, "c3": c3, "c4": c4, "c5": c5, "c6": c6,
    "c10": c10, "c11": c11, "c12": c12, "c16": c16, "c17": c17,
    "C1": C1, "C2": C2, "C3": C3, "D1": D1, "D2": D2, "D3": D3, "C1_chain": C1_chain,
}


def constant(name: str, **params) -> sp.Expr:
    """Look up a constant by name, e.g. constant("c5", N=3, m=1, s=2)."""
    try:
        fn = CONSTANTS[name]
    except KeyError:
        raise BadParams(f"unknown constant {name!r}; known: {sorted(CONSTANTS)}") from None
    try:
        return fn(**params)
    except TypeError as exc:
        raise BadParams(f"{name}: {exc}") from None


# Chow ring of P_2^N

@dataclass(frozen=True)
class ChowClass:
    """Element of Z[l_1..l_N]/(l_i^3), as {exponent tuple: coefficient}."""

    N: int
    terms: tuple  # sorted ((exponents), coeff) pairs

    @classmethod
    def from_dict(cls, N: int, d: dict) -> "ChowClass":
        kept = {e: c for e, c in d.items() if c and max(e, default=0) < 3}
        return cls(N, tuple(sorted(kept.items())))

    @classmethod
    def linear(cls, coeffs: Sequence[int]) -> "ChowClass":
        N = len(coeffs)
        return cls.from_dict(N, {tuple(int(i == k) for i in range(N)): c for k, c in enumerate(coeffs)})

    @classmethod
    def one(cls, N: int) -> "ChowClass":
        return cls.from_dict(N, {(0,) * N: 1})

    def __mul__(self, other: "ChowClass") -> "ChowClass":
        if self.N != other.N:
            raise BadParams("Chow classes live in different rings")
        out: dict = {}
        for e1, a in self.terms:
            for e2, b in other.terms:
                e = tuple(x + y for x, y in zip(e1, e2))
                if max(e, default=0) < 3:
                    out[e] = out.get(e, 0) + a * b
        return ChowClass.from_dict(self.N, out)

    def coefficient(self, exps: Sequence[int]) -> int:
        return dict(self.terms).get(tuple(exps), 0)


def chow_product(classes: Sequence[ChowClass], N: int) -> int:
    """Coefficient of (l_1 ... l_N)^2 in the product."""
    prod = ChowClass.one(N)
    for c in classes:
        prod = prod * c
    return prod.coefficient((2,) * N)


def segre_degree(N: int) -> int:
    """deg of E^N in P_2^N under the Segre embedding: (3l_1)...(3l_N)(l_1+...+l_N)^N."""
    classes = [ChowClass.linear([3 * (i == k) for i in range(N)]) for k in range(N)]
    classes += [ChowClass.linear([1] * N)] * N
    return chow_product(classes, N)


# degree bounds

def d_mult_bound(m: int) -> Fraction:
    return Fraction(3, 2) * (m * m + 1)


def d_sum_bound(ds: Sequence[Real]) -> Fraction:
    _check(len(ds) >= 1, "need at least one degree")
    return Fraction(12) ** (len(ds) - 1) * sum(Fraction(d) for d in ds)


def d_linear_bound(l: Sequence[int], N: int) -> Fraction:
    _check(len(l) == N, f"need {N} coefficients")
    return Fraction(3, 2) * 12 ** (N - 1) * (N + sum(a * a for a in l))


# certificates

@dataclass
class BoundCertificate:
    """Audit record: inputs, constants, intermediates, result and comparisons.

    Numbers are kept exact; `to_dict` renders each as an exact string plus a
    15-digit decimal.
    """

    formula: str
    anchor: str
    inputs: dict
    constants: dict = field(default_factory=dict)
    intermediates: dict = field(default_factory=dict)
    value: sp.Expr = sp.Integer(0)
    comparisons: dict = field(default_factory=dict)  # name -> (lhs, rhs)

    def comparison_holds(self, name: str) -> bool:
        lhs, rhs = self.comparisons[name]
        diff = sp.expand(sp.sympify(rhs) - lhs)
        # evaluate the difference itself so equal sides do not cancel numerically
        return diff == 0 or bool(numeric(diff) >= 0)

    @property
    def holds(self) -> bool:
        return all(self.comparison_holds(k) for k in self.comparisons)

    def to_dict(self) -> dict:
        def num(v):
            v = sp.sympify(v)
            return {"exact": sp.sstr(v), "approx": fmt(v)}

        return {
            "formula": self.formula,
            "anchor": self.anchor,
            "inputs": self.inputs,
            "constants": {k: num(v) for k, v in self.constants.items()},
            "intermediates": {k: num(v) for k, v in self.intermediates.items()},
            "value": num(self.value),
            "comparisons": {k: {"lhs": num(a), "rhs": num(b), "slack": fmt(sp.expand(sp.sympify(b) - a)),
                                "holds": self.comparison_holds(k)}
                            for k, (a, b) in self.comparisons.items()},
        }


FORMULAS: dict = {}


def _registered(fid: str) -> Callable:
    def deco(fn):
        FORMULAS[fid] = fn
        return fn

    return deco


def recompute(cert_dict: dict) -> dict:
    """Re-run the formula named in a serialized certificate on its recorded inputs."""
    fn = FORMULAS[cert_dict["formula"]]
    return fn(**_decode_inputs(cert_dict["inputs"])).to_dict()


def _encode_real(x: Real) -> str:
    return sp.sstr(exact(x))


def _decode_inputs(inputs: dict) -> dict:
    out = dict(inputs)
    for k in ("hV", "degV", "hC", "degC", "hw"):
        if k in out and isinstance(out[k], str):
            out[k] = sp.Rational(out[k])
    if "curve" in out and out["curve"] is not None:
        out["curve"] = Curve(*out["curve"])
    if "hat_h" in out:
        out["hat_h"] = [HeightInterval.from_dict(d) for d in out["hat_h"]]
    if "us" in out:
        out["us"] = [tuple(u) for u in out["us"]]
    return out


def _prod_norm_sq(us: Sequence[Sequence[int]]) -> int:
    return math.prod(norm_sq(u) for u in us)


@_registered("translate_degree")
def translate_degree_bound(us: Sequence[Sequence[int]], N: int) -> BoundCertificate:
    """deg(H+P) <= c1(N) ((3/2)(N+1)12^(N-1))^s prod|u_i|^2 for H cut out by the rows u_i."""
    s = len(us)
    _check(all(len(u) == N for u in us), f"rows must have length {N}")
    _check(all(any(u) for u in us), "rows must be nonzero")
    k4 = c4(N, s)
    p = _prod_norm_sq(us)
    return BoundCertificate(
        "translate_degree", "degree of a translate of an abelian subvariety",
        {"us": [list(u) for u in us], "N": N},
        constants={f"c4(N={N},s={s})": k4},
        intermediates={"prod |u_i|^2": p},
        value=k4 * p,
    )


def _ball_factor(N: int, s: int) -> sp.Expr:
    return sp.Integer(3 * N * (N - s + 1) * 4**N) / (omega(N - s) * omega(s)) ** 2


@_registered("translate_height")
def translate_height_bound(us: Sequence[Sequence[int]], hat_h: Sequence[HeightInterval],
                           curve: Curve, N: int) -> BoundCertificate:
    """Height of the translate H+P from the heights hhat(u_i(P)), using interval upper ends."""
    s = len(us)
    _check(s == len(hat_h), "one height per row")
    _check(1 <= s <= N, f"need 1..{N} rows")
    _check(all(len(u) == N and any(u) for u in us), f"rows must be nonzero of length {N}")
    p = _prod_norm_sq(us)
    weighted = sum(exact(h.hi) / norm_sq(u) for u, h in zip(us, hat_h))
    k = _ball_factor(N, s)
    k4, k6 = c4(N, s), c6(N, s, curve=curve)
    return BoundCertificate(
        "translate_height", "height of a translate from the heights of u_i(P)",
        {"us": [list(u) for u in us], "hat_h": [h.to_dict() for h in hat_h],
         "curve": [curve.A, curve.B], "N": N},
        constants={"ball factor": k, f"c4(N={N},s={s})": k4, f"c6(E,N={N},s={s})": k6},
        intermediates={"prod |u_i|^2": p, "sum hhat(u_i(P))/|u_i|^2": weighted},
        value=k * k4 * p * weighted + k6 * p,
    )


@dataclass
class AuxiliarySubgroup:
    H: tuple  # s x N integer matrix
    habegger: object
    degree: BoundCertificate
    height: BoundCertificate

    def to_dict(self) -> dict:
        return {"H": [list(r) for r in self.H], "habegger": self.habegger.to_dict(),
                "degree": self.degree.to_dict(), "height": self.height.to_dict()}


def auxiliary_subgroup(v: Sequence[Sequence[int]], gen_heights: Sequence[HeightInterval],
                       points: Sequence, m: int, s: int, T: Real,
                       tol: float = 1e-3) -> AuxiliarySubgroup:
    """Codimension-s abelian subvariety H with certified degree and height of H+P.

    `v` is N x m with P_i = sum_j v_ij g_j (up to torsion, not checked).
    The lattice step runs with sqrt(T) so that prod|u_i|^2 <= T.
    """
    N = len(v)
    _m(N, m)
    _s(N, s)
    _check(len(points) == N, "one point per row of v")
    Tq = exact(T)
    _check(Tq >= 1, "T must be at least 1")
    try:
        forms = rank1_linear_forms(v, [h.mid for h in gen_heights])
    except AllTorsion:
        forms = LinearFormSystem(tuple((0.0,) * N for _ in range(m)))
    hab = habegger_vectors(forms, math.sqrt(float(Tq)), s)
    us = hab.vectors
    curve = points[0].curve

    deg = translate_degree_bound(us, N)
    deg.comparisons["deg(H+P) <= c4(N,s) T"] = (deg.value, c4(N, s) * Tq)
    deg.inputs["T"] = _encode_real(Tq)

    hats = []
    for u in us:
        Q = curve.identity
        for a, P in zip(u, points):
            Q = Q + a * P
        hats.append(neron_tate(Q, tol))
    hgt = translate_height_bound(us, hats, curve, N)
    hP = sum(exact(neron_tate(P, tol).hi) for P in points)
    k5, k6 = c5(N, m, s), c6(N, s, curve=curve)
    rhs = k5 * Tq ** (1 - sp.Rational(N, m * s)) * hP + k6 * Tq
    hgt.constants.update({f"c5(N={N},m={m},s={s})": k5})
    hgt.intermediates["hhat(P) upper"] = hP
    hgt.comparisons["h(H+P) <= c5 T^(1-N/(ms)) hhat(P) + c6 T"] = (hgt.value, rhs)
    for name, cert in (("degree", deg), ("height", hgt)):
        if not cert.holds:
            raise CertificateViolation(f"{name} inequality fails: {cert.to_dict()['comparisons']}")
    return AuxiliarySubgroup(tuple(us), hab, deg, hgt)


# headline bounds

def choose_T(N: int, degV: Real) -> sp.Expr:
    """T = ((N/(N-1)) c11(N)/3 deg V)^(N-1), balancing the hhat(P) terms."""
    _N(N, 3)
    return (sp.Rational(N, N - 1) * c11(N) / 3 * exact(degV)) ** (N - 1)


@_registered("theorem12")
def theorem12_bound(curve: Curve, N: int, hV: Real, degV: Real) -> BoundCertificate:
    """hhat(P) for V-torsion anomalous points of V in E^N, in closed and chain form.

    For N = 2 the only such points are torsion, so the bound is 0.
    """
    _N(N, 2)
    h, d = exact(hV), exact(degV)
    _check(h >= 0 and d >= 1, "need h(V) >= 0 and deg V >= 1")
    inputs = {"curve": [curve.A, curve.B], "N": N, "hV": _encode_real(h), "degV": _encode_real(d)}
    anchor = "height bound for V-torsion anomalous points"
    if N == 2:
        return BoundCertificate("theorem12", anchor, inputs, value=sp.Integer(0),
                                intermediates={"note": sp.Integer(0)})
    w = hw_exact(curve)
    k1, k2, k3 = C1(N), C2(N, hw=w), C3(N, hw=w)
    closed = k1 * h * d ** (N - 1) + k2 * d**N + k3
    T = choose_T(N, d)
    k10, k12 = c10(N), c12(N, hw=w)
    chain = (sp.Rational(N, 3) * k10 * T * h
             + sp.Rational(N, 3) * (3**N * LOG2 / 2 * k10 + k12) * T * d
             + N * c2(N, hw=w))
    return BoundCertificate(
        "theorem12", anchor, inputs,
        constants={"C1": k1, "C2": k2, "C3": k3, "c10": k10, "c11": c11(N), "c12": k12,
                   "c2": c2(N, hw=w), "h_W": w},
        intermediates={"T": T, "chain": chain},
        value=closed,
        comparisons={"chain <= closed form": (chain, closed)},
    )


TRANSVERSE_E2 = "transverse_E2"
WEAK_TRANSVERSE_N = "weak_transverse_N"


@_registered("theorem14")
def theorem14_bound(curve: Curve, variant: str, hC: Real, degC: Real,
                    N: Optional[int] = None) -> BoundCertificate:
    """hhat(P) for points of a curve C in E^N lying in subgroups of rank <= 1."""
    if variant == WEAK_TRANSVERSE_N:
        _check(N is not None, "the weak-transverse variant needs N")
        cert = theorem12_bound(curve, N, hC, degC)
        cert.formula = "theorem14"
        cert.inputs = {"curve": [curve.A, curve.B], "variant": variant,
                       "hC": cert.inputs["hV"], "degC": cert.inputs["degV"], "N": N}
        cert.anchor = "curve in E^N, rank <= 1, weak-transverse"
        return cert
    _check(variant == TRANSVERSE_E2, f"unknown variant {variant!r}")
    h, d = exact(hC), exact(degC)
    _check(h >= 0 and d >= 1, "need h(C) >= 0 and deg C >= 1")
    w = hw_exact(curve)
    d1, d2, d3 = D1(), D2(hw=w), D3(hw=w)
    value = d1 * h * d**2 + d2 * d**3 + d3
    k1 = C1(3)
    chain_cubic = C2(3, hw=w) + 6 * c2(3, hw=w) * k1 + 2 * c3(3, hw=w) * k1
    chain = 2 * k1 * h * d**2 + chain_cubic * d**3 + C3(3, hw=w)
    return BoundCertificate(
        "theorem14", "transverse curve in E^2, rank <= 1",
        {"curve": [curve.A, curve.B], "variant": variant, "hC": _encode_real(h),
         "degC": _encode_real(d), "N": N},
        constants={"D1": d1, "D2": d2, "D3": d3, "C1(3)": k1, "h_W": w},
        intermediates={"chain": chain, "chain degC^3 coefficient": chain_cubic},
        value=value,
        comparisons={"chain <= closed form": (chain, value)},
    )
