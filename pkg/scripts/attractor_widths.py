"""Width of the attractor envelope against depth, over generic fibres and over theta*."""

import argparse

import numpy as np

from blowup.general import generic_fibres
from blowup.skew import default_qpf, global_attractor


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depths", type=int, nargs="+", default=[0, 5, 10, 20, 30, 40])
    ap.add_argument("--fibres", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    b = default_qpf()
    g = generic_fibres(b, args.fibres, np.random.default_rng(args.seed))
    star = np.array([b.pinch.theta_star])
    print(f"{'depth':>5} {'generic max':>14} {'generic mean':>14} {'theta*':>14}")
    for d in args.depths:
        w = global_attractor(b, d, g).width()
        ws = global_attractor(b, d, star).width()[0]
        print(f"{d:5d} {w.max():14.6e} {w.mean():14.6e} {ws:14.10f}")


if __name__ == "__main__":
    main()
