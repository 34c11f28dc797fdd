"""``blowup run`` and ``blowup verify``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .artifacts import write_artifacts, write_json
from .bases import AperiodicityError
from .config import BASES, CONSTRUCTIONS, PINCH_MODES, ConfigError, load_config
from .denjoy import BasepointError, RationalityError
from .gallery import ConstructionError
from .measure import PreconditionError
from .skew import PinchError
from .verify import verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# errors that mean the requested system cannot be built from this configuration
SETUP_ERRORS = (ConfigError, AperiodicityError, BasepointError, RationalityError,
                ConstructionError, PreconditionError, PinchError)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--construction", choices=CONSTRUCTIONS)
    common.add_argument("--config", type=Path, help="TOML file; flags override its values")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int)
    common.add_argument("--grid", type=int, help="points in dataset grids")
    common.add_argument("--depth", type=int, help="attractor depth")
    common.add_argument("--N", type=int, dest="N", help="truncation level, -1 disables the blow-up")
    common.add_argument("--pinch", choices=PINCH_MODES)
    common.add_argument("--base", choices=BASES)
    common.add_argument("--samples", type=int, help="minimal-set samples")
    common.add_argument("--horizon", type=int, help="distality probe horizon")
    common.add_argument("--workers", type=int, default=4, help="threads for the property suite")
    common.add_argument("-q", "--quiet", action="store_true")

    p = argparse.ArgumentParser(prog="blowup", description="Blow-ups of orbits in skew products.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", parents=[common], help="write datasets and report.json")
    run.add_argument("--verify-only", action="store_true", help="skip dataset emission")
    sub.add_parser("verify", parents=[common], help="run the property suite only")
    return p


OVERRIDES = ("construction", "out", "seed", "grid", "depth", "N", "pinch", "base", "samples", "horizon")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, {k: getattr(args, k) for k in OVERRIDES})
        if args.workers < 1:
            raise ConfigError("workers must be positive")
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        report = verify(cfg, workers=args.workers)
        t_verify = time.perf_counter() - t0
        written = []
        if args.command == "run" and not args.verify_only:
            written = write_artifacts(cfg, out)
    except SETUP_ERRORS as exc:
        print(f"blowup: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    (out / "report.json").write_text(report.to_json() + "\n")
    # wall-clock numbers live apart from the report so that it stays reproducible
    write_json(out / "timings.json", {"verify_total": t_verify, "properties": report.timings})
    write_json(out / "config.json", cfg.as_dict())
    if not args.quiet:
        for line in report.summary_lines():
            print(line)
        for note in report.notes:
            print(f"note: {note}")
        for path in written:
            print(f"wrote {path}")
        print(f"{'all properties pass' if report.ok else 'property failure'}: {out / 'report.json'}")
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
