"""Tabulate degree, genus and the height/coefficient bounds for C_n.

    python scripts/reproduce_cn_bounds.py --n-max 10 [--json]
"""

import argparse
import json

from ecbounds.bounds import fmt, numeric
from ecbounds.cn_family import (
    PUBLISHED_A_CONST, PUBLISHED_POINT_CONST, cn_coeff_bounds, cn_degree, cn_genus, cn_point_height_bound,
)


def row(n: int) -> dict:
    point = cn_point_height_bound(n).value
    cb = cn_coeff_bounds(n)
    return {
        "n": n,
        "degree": cn_degree(n),
        "genus": cn_genus(n)[0],
        "point_bound": fmt(point),
        "point_ratio": float(numeric(point) / numeric(PUBLISHED_POINT_CONST * (n + 1) ** 3)),
        "a_max": fmt(cb.a_max),
        "a_ratio": float(numeric(cb.a_max) / numeric(PUBLISHED_A_CONST * (n + 1))),
        "a_max_exact": fmt(cb.a_max_exact),
    }


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--json", action="store_true")
    a = p.parse_args()
    rows = [row(n) for n in range(1, a.n_max + 1)]
    if a.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'n':>4} {'deg':>5} {'g':>5} {'point bound':>22} {'/pub':>8} {'a_max':>22} {'/pub':>8}")
    for r in rows:
        print(f"{r['n']:>4} {r['degree']:>5} {r['genus']:>5} {r['point_bound']:>22} {r['point_ratio']:>8.5f} "
              f"{r['a_max']:>22} {r['a_ratio']:>8.5f}")


if __name__ == "__main__":
    main()
