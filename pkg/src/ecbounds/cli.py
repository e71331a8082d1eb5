"""Command-line front end.

Every subcommand builds one JSON-compatible record
``{"schema": SCHEMA, "command": ..., "result": ...}``; `--format text`
renders the same record as indented ``key: value`` lines.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

import sympy as sp

from . import bounds as B
from .cn_family import cn_membership, cn_report, cn_search, cn_search_bruteforce
from .curve import G0, Curve, parse_point, scalar_mul
from .divpoly import DivisionPolynomials, degree_report
from .errors import EcBoundsError
from .heights import height_comparison_report, neron_tate
from .lattice import (
    IntegerLattice, adjugate, adjugate_column_bound_holds, minkowski_certificate, orthogonal_lattice,
    stacked_determinant_check,
)

SCHEMA = "ecbounds/1"
SHOW_POLY_MAX_M = 8


class UsageError(Exception):
    pass


def _ints(text: str) -> list:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _matrix(text: str) -> list:
    return [_ints(row) for row in text.split(";") if row.strip()]


def _curve(text: str) -> Curve:
    vals = _ints(text)
    if len(vals) != 2:
        raise UsageError("--curve takes A,B")
    return Curve(*vals)


def _real(text: str):
    try:
        return Fraction(text)
    except ValueError:
        raise UsageError(f"expected a rational or decimal, got {text!r}") from None


def factored(expr: sp.Expr) -> Optional[str]:
    """'2^64*3^40/pi^8' style rendering for rational * pi^k, else None."""
    coeff, rest = sp.sympify(expr).as_coeff_Mul()
    k = 0
    if rest != 1:
        base, exp = rest.as_base_exp()
        if base != sp.pi or not exp.is_integer:
            return None
        k = int(exp)
    if not coeff.is_Rational or coeff == 0:
        return None

    def fac(n: int) -> str:
        f = sp.factorint(n)
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(f.items())) or "1"

    num, den = fac(abs(int(coeff.p))), fac(int(coeff.q))
    num_parts = [num] if num != "1" or k <= 0 else []
    den_parts = [den] if den != "1" else []
    if k > 0:
        num_parts.append(f"pi^{k}" if k > 1 else "pi")
    elif k < 0:
        den_parts.append(f"pi^{-k}" if k < -1 else "pi")
    out = ("-" if coeff < 0 else "") + ("*".join(num_parts) or "1")
    if den_parts:
        out += "/" + ("*".join(den_parts) if len(den_parts) == 1 else "(" + "*".join(den_parts) + ")")
    return out


# subcommands: each returns the "result" record

def cmd_constants(a) -> dict:
    params = {k: getattr(a, k) for k in ("N", "m", "s", "r") if getattr(a, k) is not None}
    if a.name == "omega":
        if "r" not in params:
            raise UsageError("omega needs --r")
    else:
        params.pop("r", None)
    takes_hw = a.name in {"c2", "c3", "c6", "c12", "C2", "C3", "D2", "D3"}
    if takes_hw and a.curve:
        params["curve"] = _curve(a.curve)
    elif takes_hw and a.hw is not None:
        params["hw"] = _real(a.hw)
    value = B.constant(a.name, **params)
    shown = {k: ([v.A, v.B] if isinstance(v, Curve) else str(v) if isinstance(v, Fraction) else v)
             for k, v in params.items()}
    rec = {"name": a.name, "params": shown, "exact": sp.sstr(value), "factored": factored(value),
           "approx": None}
    if not value.free_symbols:
        rec["approx"] = B.fmt(value)
    return rec


def cmd_thm12(a) -> dict:
    return B.theorem12_bound(_curve(a.curve), a.N, _real(a.hV), _real(a.degV)).to_dict()


def cmd_thm14(a) -> dict:
    return B.theorem14_bound(_curve(a.curve), a.variant, _real(a.hC), _real(a.degC), a.N).to_dict()


def cmd_cn_report(a) -> dict:
    return cn_report(a.n).to_dict()


def cmd_cn_search(a) -> dict:
    hits = cn_search(a.n, a.radius)
    rec = {"n": a.n, "radius": a.radius, "pairs": [h.to_dict() for h in hits]}
    if a.check:
        brute = cn_search_bruteforce(a.n, a.radius)
        rec["bruteforce_agrees"] = brute == [(h.a, h.b) for h in hits]
        rec["membership_ok"] = all(cn_membership(h.a, h.b, a.n) for h in hits)
    return rec


def cmd_height(a) -> dict:
    E = _curve(a.curve)
    P = parse_point(a.point, E)
    hhat = neron_tate(P, a.tol)
    rec = {"curve": [E.A, E.B], "point": P.serialize(), "tol": repr(a.tol), "hhat": hhat.to_dict()}
    if a.envelopes:
        rec["envelopes"] = height_comparison_report(P, a.tol).to_dict()
    return rec


def cmd_lattice(a) -> dict:
    rows = _matrix(a.basis)
    if a.adjugate:
        adj = adjugate(rows)
        return {"matrix": rows, "adjugate": adj, "column_bound_holds": adjugate_column_bound_holds(rows, adj)}
    L = IntegerLattice(rows)
    rec = {"lattice": L.to_dict(), "det": repr(L.det), "minima": L.minima().to_dict(),
           "minkowski": minkowski_certificate(L).to_dict()}
    if a.orthogonal:
        P = orthogonal_lattice(L)
        lhs, rhs = stacked_determinant_check(L, P)
        rec["orthogonal"] = {"lattice": P.to_dict(), "det": repr(P.det),
                             "det(U)^2": lhs, "det^2 product": rhs, "identity_holds": lhs == rhs}
    return rec


def cmd_divpoly(a) -> dict:
    E = _curve(a.curve) if a.curve else None
    rep = degree_report(a.m, E)
    rec = {"m": a.m, "curve": None if E is None else [E.A, E.B], "degrees": rep.to_dict()}
    if a.show:
        if a.m > SHOW_POLY_MAX_M:
            raise UsageError(f"--show is limited to m <= {SHOW_POLY_MAX_M}")
        t = DivisionPolynomials(E)
        rec["psi"], rec["phi"], rec["omega"] = str(t.psi(a.m)), str(t.phi(a.m)), str(t.omega(a.m))
    return rec


def cmd_aux(a) -> dict:
    v = [[x] for x in _ints(a.v)]
    pts = [scalar_mul(x[0], G0) for x in v]
    aux = B.auxiliary_subgroup(v, [neron_tate(G0, a.tol)], pts, m=1, s=a.s, T=_real(a.T), tol=a.tol)
    return {"v": [x[0] for x in v], "s": a.s, "T": a.T, **aux.to_dict()}


COMMANDS = {
    "constants": cmd_constants, "bound-thm12": cmd_thm12, "bound-thm14": cmd_thm14,
    "cn-report": cmd_cn_report, "cn-search": cmd_cn_search, "height": cmd_height,
    "lattice": cmd_lattice, "divpoly": cmd_divpoly, "aux-subgroup": cmd_aux,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ecbounds", description="Explicit height and degree bounds on E^N.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        sp_ = sub.add_parser(name, help=help_)
        sp_.add_argument("--format", choices=("text", "json"), default="text")
        return sp_

    c = add("constants", "evaluate a named constant")
    c.add_argument("--name", required=True, choices=sorted(B.CONSTANTS))
    for flag in ("N", "m", "s", "r"):
        c.add_argument(f"--{flag}", type=int)
    c.add_argument("--hw", help="value of h_W (rational or decimal)")
    c.add_argument("--curve", help="A,B; binds h_W to the curve")

    t = add("bound-thm12", "height bound for V-torsion anomalous points of V in E^N")
    t.add_argument("--curve", default="1,-1")
    t.add_argument("--N", type=int, required=True)
    t.add_argument("--hV", required=True)
    t.add_argument("--degV", required=True)

    t = add("bound-thm14", "height bound for a curve in E^N meeting rank <= 1 subgroups")
    t.add_argument("--curve", default="1,-1")
    t.add_argument("--variant", choices=(B.TRANSVERSE_E2, B.WEAK_TRANSVERSE_N), default=B.TRANSVERSE_E2)
    t.add_argument("--hC", required=True)
    t.add_argument("--degC", required=True)
    t.add_argument("--N", type=int)

    t = add("cn-report", "degree, genus and bounds for C_n")
    t.add_argument("--n", type=int, required=True)

    t = add("cn-search", "rational points ([a]g, [b]g) on C_n with |a|, |b| <= radius")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--radius", type=int, required=True)
    t.add_argument("--check", action="store_true", help="also run the brute-force double loop")

    t = add("height", "certified Neron-Tate height of a point")
    t.add_argument("--curve", default="1,-1")
    t.add_argument("--point", required=True, help="x,y with rational entries, or O")
    t.add_argument("--tol", type=float, default=1e-3)
    t.add_argument("--envelopes", action="store_true", help="report the height comparison slacks")

    t = add("lattice", "successive minima, determinant and Minkowski certificate")
    t.add_argument("--basis", required=True, help="rows separated by ';', entries by ','")
    t.add_argument("--orthogonal", action="store_true")
    t.add_argument("--adjugate", action="store_true", help="treat the rows as a square matrix")

    t = add("divpoly", "degree report for psi_m, phi_m, omega_m")
    t.add_argument("--m", type=int, required=True)
    t.add_argument("--curve", help="A,B; omit for the generic polynomials")
    t.add_argument("--show", action="store_true")

    t = add("aux-subgroup", "auxiliary subgroup for P = ([v_1]g, ..., [v_N]g) on E0^N")
    t.add_argument("--v", required=True, help="comma-separated multipliers v_i")
    t.add_argument("--s", type=int, required=True)
    t.add_argument("--T", required=True)
    t.add_argument("--tol", type=float, default=1e-3)
    return p


def run(argv: Sequence[str]) -> tuple:
    """Parse and execute; returns (record, format). Errors propagate."""
    args = build_parser().parse_args(argv)
    return {"schema": SCHEMA, "command": args.command, "result": COMMANDS[args.command](args)}, args.format


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v) if not isinstance(v, str) else v}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        record, fmt_ = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except (UsageError, ValueError, ZeroDivisionError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except EcBoundsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if fmt_ == "json":
        print(json.dumps(record, indent=2))
    else:
        print(render_text(record))
    return 0


if __name__ == "__main__":
    sys.exit(main())
