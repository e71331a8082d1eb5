"""Certified hhat(g) on E0 at decreasing tolerances, with the doubling depth used."""

import argparse

from ecbounds.curve import G0
from ecbounds.heights import doubling_depth, neron_tate, silverman_constants


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--tols", default="1e-2,1e-3,1e-4,1e-5")
    a = p.parse_args()
    cm, cp = silverman_constants(G0.curve)
    print(f"Silverman constants on E0: C- = {cm:.6f}, C+ = {cp:.6f}")
    for tol in map(float, a.tols.split(",")):
        I = neron_tate(G0, tol)
        print(f"tol {tol:.0e}: depth {doubling_depth(G0.curve, tol):2d}  [{I.lo:.9f}, {I.hi:.9f}]  "
              f"width {I.width:.2e}  (x2: {2 * I.mid:.6f})")


if __name__ == "__main__":
    main()
