"""Print every named constant at a few parameter points, plus the exact identities among them."""

import sympy as sp

from ecbounds import bounds as B
from ecbounds.curve import E0

POINTS = {
    "c1": [{"N": 3}], "c2": [{"N": 3}], "c3": [{"N": 3}], "c4": [{"N": 3, "s": 2}],
    "c5": [{"N": 3, "m": 1, "s": 2}], "c6": [{"N": 3, "s": 2}], "c10": [{"N": 3}], "c11": [{"N": 3}],
    "c12": [{"N": 3}], "c16": [{"N": 3, "m": 1}], "c17": [{"N": 3, "m": 1}],
    "C1": [{"N": 3}, {"N": 4}], "C2": [{"N": 3}], "C3": [{"N": 3}], "D1": [{}], "D2": [{}], "D3": [{}],
}


def main():
    for name, plist in POINTS.items():
        for params in plist:
            val = B.constant(name, **params)
            shown = ", ".join(f"{k}={v}" for k, v in params.items())
            print(f"{name}({shown}) = {B.fmt(B.numeric(val, curve=E0))}    exact: {sp.sstr(val)}")
    print()
    checks = {
        "D1 - 2 C1(3)": B.D1() - 2 * B.C1(3),
        "D3 - C3(3)": B.D3() - B.C3(3),
        "D2 - chain": B.D2() - (B.C2(3) + 6 * B.c2(3) * B.C1(3) + 2 * B.c3(3) * B.C1(3)),
        **{f"C1_chain({N}) - C1({N})": B.C1_chain(N) - B.C1(N) for N in (3, 4, 5)},
    }
    for label, diff in checks.items():
        print(f"{label:24s} -> {'0 (exact)' if sp.expand(diff) == 0 else sp.sstr(sp.simplify(diff))}")


if __name__ == "__main__":
    main()
