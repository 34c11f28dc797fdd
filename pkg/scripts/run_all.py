"""Run every construction through ``blowup run`` and collect the exit codes."""

import argparse
import time

from blowup.cli import main as cli

RUNS = [
    ["--construction", "denjoy"],
    ["--construction", "qpf"],
    ["--construction", "qpf", "--pinch", "oscillating"],
    ["--construction", "qpf", "--N", "-1"],
    ["--construction", "general", "--base", "torus2"],
    ["--construction", "general", "--base", "odometer"],
    ["--construction", "sharkovsky"],
    ["--construction", "rees"],
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out")
    args = ap.parse_args()
    for flags in RUNS:
        name = "-".join(flags[1::2])
        t0 = time.perf_counter()
        code = cli(["run", *flags, "--out", f"{args.out}/{name}", "-q"])
        print(f"{' '.join(flags):55s} exit {code}  {time.perf_counter() - t0:6.1f}s")


if __name__ == "__main__":
    main()
