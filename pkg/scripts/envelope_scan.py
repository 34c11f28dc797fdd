"""Margin and coverage of minimal-set samples near theta* as the sample grows,
for one-sided and oscillating pinching."""

import argparse

from blowup.skew import default_qpf, filled_in_envelope


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, nargs="+", default=[1_000, 10_000, 100_000, 300_000])
    args = ap.parse_args()
    print(f"{'mode':>12} {'samples':>8} {'margin':>10} {'coverage':>10}  verdict")
    for mode in ("one-sided", "oscillating"):
        b = default_qpf(mode)
        for k in args.samples:
            env = filled_in_envelope(b, *b.minimal_set_sample(k))
            print(f"{mode:>12} {k:8d} {env.margin:10.4g} {env.coverage:10.4g}  {env.verdict}")


if __name__ == "__main__":
    main()
