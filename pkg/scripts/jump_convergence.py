"""Approach the blown-up fibre from both sides and print how the one-sided
limits of mu_theta[0, gamma] separate, with the extrapolated jump."""

import argparse

import numpy as np

from blowup.denjoy import WeightSequence
from blowup.skew import default_qpf, discontinuity_jump


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a0", type=float, nargs="+", default=[0.25, 0.1, 0.02])
    ap.add_argument("--N", type=int, default=40)
    args = ap.parse_args()
    print(f"{'a0':>8} {'j':>3} {'difference':>22}")
    for a0 in args.a0:
        b = default_qpf(N=args.N, weights=WeightSequence(a0=a0))
        est = discontinuity_jump(b)
        for j in (1, 5, 10, 20, 30):
            print(f"{a0:8.4f} {j:3d} {est.differences[j - 1]:22.17f}")
        print(f"{a0:8.4f} {'lim':>3} {est.jump:22.17f}  converged={est.converged}")


if __name__ == "__main__":
    main()
