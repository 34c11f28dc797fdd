"""CSV and JSON datasets written by ``blowup run``."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from . import denjoy as dj
from .config import RunConfig
from .gallery import build_sharkovsky, distality_probe
from .measure import cdf, cdf_left, quantile
from .skew import BlownUpSystem, default_qpf, global_attractor
from .verify import general_system, qpf_system, rees_pairs, rees_system


def fmt(v) -> str:
    if isinstance(v, (str, bytes)):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path: Path, header, columns) -> Path:
    """Columns of equal length; floats with 17 significant digits."""
    rows = zip(*[np.asarray(c).tolist() if not isinstance(c, list) else c for c in columns])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def write_json(path: Path, obj) -> Path:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def _theta_columns(base, theta):
    """Named coordinate columns for circle, torus or odometer points."""
    theta = np.asarray(theta)
    if base.point_shape:
        return [f"theta{i + 1}" for i in range(theta.shape[-1])], [theta[..., i] for i in range(theta.shape[-1])]
    if theta.dtype == np.uint64:
        return ["theta"], [[int(t) for t in theta.reshape(-1)]]
    return ["theta"], [theta]


# -- per construction --------------------------------------------------------------

def denjoy_artifacts(cfg: RunConfig, out: Path):
    sys = dj.DenjoySystem.build(cfg.omega, cfg.x0, dj.WeightSequence(cfg.c, cfg.r, cfg.a0), cfg.N)
    f = dj.denjoy_map(sys)
    y = np.linspace(0.0, 1.0, cfg.grid, endpoint=False)
    x = (np.arange(cfg.grid) + 0.5) / cfg.grid
    return [
        write_csv(out / "gaps.csv", ["n", "c_n", "d_n", "a_n"], [sys.n.tolist(), sys.c, sys.d, sys.a]),
        write_csv(out / "graph.csv", ["y", "f_y"], [y, f(y)]),
        write_csv(out / "cdf.csv", ["y", "cdf", "cdf_left"], [y, cdf(sys.nu, y), cdf_left(sys.nu, y)]),
        write_csv(out / "quantile.csv", ["x", "quantile"], [x, quantile(sys.nu, x)]),
    ]


def segment_rows(b: BlownUpSystem):
    rows = []
    if b.N >= 0:
        for n in range(-b.N, b.N + 1):
            th, lo, hi = b.segment(n)
            rows.append((n, th, lo, hi))
    return rows


def qpf_artifacts(cfg: RunConfig, out: Path, b: BlownUpSystem | None = None):
    b = b or qpf_system(cfg)
    th = np.linspace(0.0, 1.0, cfg.grid, endpoint=False)
    segs = segment_rows(b)
    kind = ["grid"] * th.size + ["segment"] * len(segs)
    n = [""] * th.size + [s[0] for s in segs]
    theta = np.concatenate([th, [s[1] for s in segs]])
    gm = np.concatenate([b.gamma_minus(th), [s[2] for s in segs]])
    gp = np.concatenate([b.gamma_plus(th), [s[3] for s in segs]])
    paths = [write_csv(out / "pinched_set.csv", ["kind", "n", "theta", "gamma_minus", "gamma_plus"],
                       [kind, n, theta, gm, gp])]
    env = global_attractor(b, cfg.depth, th)
    paths.append(write_csv(out / f"attractor_depth_{cfg.depth}.csv", ["theta", "lower", "upper"],
                           [th, env.lower[-1], env.upper[-1]]))
    return paths


def general_artifacts(cfg: RunConfig, out: Path, b: BlownUpSystem | None = None):
    b = b or general_system(cfg)
    segs = segment_rows(b)
    if not segs:
        return [write_csv(out / "segments.csv", ["n", "lo", "hi", "width"], [[], [], [], []])]
    names, cols = _theta_columns(b.base, np.stack([np.asarray(s[1]) for s in segs]))
    lo = np.array([s[2] for s in segs])
    hi = np.array([s[3] for s in segs])
    return [write_csv(out / "segments.csv", ["n", *names, "lo", "hi", "width"],
                      [[s[0] for s in segs], *cols, lo, hi, hi - lo])]


def sharkovsky_artifacts(cfg: RunConfig, out: Path):
    w = dj.WeightSequence(cfg.c, cfg.r, cfg.a0)
    inner = default_qpf("one-sided", cfg.N, w, cfg.omega, cfg.theta_star, cfg.pinch_scale, cfg.lam)
    s = build_sharkovsky(inner)
    th = np.linspace(0.0, 1.0, cfg.grid, endpoint=False)
    env = global_attractor(inner, cfg.depth, th)
    paths = [write_csv(out / "sharkovsky_attractor.csv", ["theta", "lower", "upper"],
                       [th, s.h1(th, env.lower[-1]), s.h1(th, env.upper[-1])])]
    grid = th[:: max(1, th.size // 1000)]
    rows_t, rows_c, rows_1, rows_3 = [], [], [], []
    for c in (0.0, 0.5, 1.0):
        t, x = grid, np.full(grid.shape, c)
        _, x1 = s(t, x)
        for _ in range(3):
            t, x = s(t, x)
        rows_t.append(grid)
        rows_c.append(np.full(grid.shape, c))
        rows_1.append(x1)
        rows_3.append(x)
    paths.append(write_csv(out / "sharkovsky_3cycle.csv", ["theta", "x", "F_x", "F3_x"],
                           [np.concatenate(rows_t), np.concatenate(rows_c),
                            np.concatenate(rows_1), np.concatenate(rows_3)]))
    return paths


def rees_artifacts(cfg: RunConfig, out: Path, r=None):
    r = r or rees_system(cfg)
    segs = segment_rows(r.bsys)
    paths = [write_csv(out / "rees_segments.csv", ["n", "theta", "lo", "hi", "width"],
                       [[s[0] for s in segs], [s[1] for s in segs], [s[2] for s in segs],
                        [s[3] for s in segs], [s[3] - s[2] for s in segs]])]
    p, q = rees_pairs(r, cfg.seed)
    rec = distality_probe(r, p, q, cfg.horizon)
    body = {
        "horizon": cfg.horizon,
        "control_pairs": {
            "count": int(p.shape[0]),
            "two_sided_min": float(rec.two_sided.min()),
            "one_sided_min": float(rec.one_sided.min()),
            "per_pair_two_sided": rec.two_sided.tolist(),
            "per_pair_one_sided": rec.one_sided.tolist(),
            "argmin": np.asarray(rec.argmin).tolist(),
        },
    }
    if segs:
        th, lo, hi = r.segment(0)
        K = min(40, cfg.N)
        same = distality_probe(r, [[th, lo + 0.25 * (hi - lo)]], [[th, lo + 0.75 * (hi - lo)]], K)
        body["segment_pair"] = {
            "horizon": K,
            "two_sided_min": float(same.two_sided[0]),
            "one_sided_min": float(same.one_sided[0]),
            "argmin": int(np.asarray(same.argmin)[0]),
        }
    paths.append(write_json(out / "distality_report.json", body))
    return paths


WRITERS = {
    "denjoy": denjoy_artifacts,
    "qpf": qpf_artifacts,
    "qpf-filled": qpf_artifacts,
    "general": general_artifacts,
    "sharkovsky": sharkovsky_artifacts,
    "rees": rees_artifacts,
}


def write_artifacts(cfg: RunConfig, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    return WRITERS[cfg.construction](cfg, out)
