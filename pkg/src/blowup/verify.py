"""Property suites behind ``blowup verify`` and their report format."""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import denjoy as dj
from .bases import return_gaps
from .config import RunConfig
from .gallery import (
    build_g,
    build_rees,
    build_sharkovsky,
    certify_no_invariant_curve,
    distality_probe,
    sign_changes,
)
from .general import (
    certified_properties,
    cross_check_circle,
    default_general,
    generic_fibres,
)
from .measure import circle_dist, wrap
from .skew import (
    BlownUpSystem,
    PinchedSetChart,
    attractor_closed_form,
    default_qpf,
    discontinuity_jump,
    filled_in_envelope,
    global_attractor,
)

# distality floor measured for the 100 seeded off-segment pairs over |n| <= 1000
# (0.0860); asserted with headroom as a regression guard
REES_DISTALITY_FLOOR = 0.07


class Skip(Exception):
    """Property does not apply to this run."""


@dataclass(frozen=True)
class PropertyResult:
    id: str
    claim: str
    residual: float
    tolerance: float
    relation: str          # "<=": residual must not exceed tolerance; ">=": must reach it
    status: str            # pass | fail | skip
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"


@dataclass
class VerificationReport:
    construction: str
    config_sha256: str
    seed: int
    results: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> str:
        body = {
            "construction": self.construction,
            "config_sha256": self.config_sha256,
            "seed": self.seed,
            "ok": self.ok,
            "notes": list(self.notes),
            "results": [_clean(asdict(r)) for r in self.results],
        }
        return json.dumps(body, indent=2, sort_keys=True)

    def summary_lines(self):
        for r in self.results:
            yield f"[{r.status.upper():4s}] {r.id}: {r.residual:.3e} {r.relation} {r.tolerance:.3e}  {r.note}".rstrip()


def _clean(d):
    for k, v in d.items():
        if isinstance(v, float) and not np.isfinite(v):
            d[k] = repr(v)
    return d


@dataclass(frozen=True)
class Check:
    id: str
    claim: str
    run: Callable


def _result(check: Check) -> PropertyResult:
    try:
        out = check.run()
    except Skip as why:
        return PropertyResult(check.id, check.claim, float("nan"), float("nan"), "", "skip", str(why))
    residual, tol, rel = out[:3]
    note = out[3] if len(out) > 3 else ""
    residual, tol = float(residual), float(tol)
    ok = residual <= tol if rel == "<=" else residual >= tol
    return PropertyResult(check.id, check.claim, residual, tol, rel, "pass" if ok else "fail", note)


def run_checks(checks, construction: str, digest: str, seed: int, workers: int = 4) -> VerificationReport:
    report = VerificationReport(construction, digest, seed)
    timings = {}

    def timed(c):
        t0 = time.perf_counter()
        r = _result(c)
        timings[c.id] = time.perf_counter() - t0
        return r

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(timed, checks))
    report.results = sorted(results, key=lambda r: r.id)
    report.timings = dict(sorted(timings.items()))
    return report


def inversions(values, axis=-1) -> int:
    """Number of non-increasing consecutive steps."""
    return int(np.sum(np.diff(values, axis=axis) <= 0.0))


def overlapping_arcs(ends) -> int:
    """Pairs of closed arcs ``[lo, hi]`` (wrapped to the circle) that meet."""
    lo = wrap(ends[:, 0])
    length = wrap(ends[:, 1] - ends[:, 0])
    rel = wrap(lo[None, :] - lo[:, None])
    meet = (rel <= length[:, None]) & ~np.eye(lo.size, dtype=bool)
    return int(np.sum(np.triu(meet | meet.T, 1)))


# -- denjoy -----------------------------------------------------------------------

def denjoy_system(cfg: RunConfig) -> dj.DenjoySystem:
    w = dj.WeightSequence(cfg.c, cfg.r, cfg.a0)
    return dj.DenjoySystem.build(cfg.omega, cfg.x0, w, cfg.N)


def denjoy_checks(cfg: RunConfig, sys: dj.DenjoySystem | None = None):
    sys = sys or denjoy_system(cfg)
    f = dj.denjoy_map(sys)
    h = dj.denjoy_h(sys)
    rng = np.random.default_rng(cfg.seed)
    ys = rng.random(10_000)
    trivial = sys.N < 0

    def gap_lengths():
        if trivial:
            raise Skip("no blow-up")
        return np.max(np.abs((sys.d - sys.c) - sys.a)), 2e-12, "<="

    def budget():
        total = float(np.sum(sys.d - sys.c))
        return abs(total - (1.0 - sys.weights.b - sys.weights.tail(sys.N))), 1e-9, "<="

    def semiconj():
        return np.max(circle_dist(h(f(ys)), wrap(h(ys) + sys.omega))), 1e-9, "<="

    def inverse():
        return np.max(circle_dist(f.inv(f(ys)), ys)), 1e-9, "<="

    def endpoints():
        if sys.N < 1:
            raise Skip("needs N >= 1")
        return np.max(circle_dist(f(sys.c[:-1]), sys.c[1:])), 1e-12, "<="

    def rotation():
        rho = dj.rotation_number(f.forward, 10_000)
        return abs(rho - sys.omega), 2e-3, "<="

    def wandering():
        if trivial:
            raise Skip("no gaps")
        ends = dj.gap_images(sys, 0, 100)
        return overlapping_arcs(ends), 0, "<=", "overlapping pairs among I_0 and 100 images"

    def monotone():
        grid = np.linspace(0.0, 1.0, 10_001)
        bad = inversions(f.forward(grid[:-1]))
        for n, c, d in zip(sys.n, sys.c, sys.d):
            if d - c >= 1e-9:
                bad += inversions(f.forward(np.linspace(c, d, 10_000)))
        return bad, 0, "<="

    def outside_gaps():
        pts = dj.minimal_set_sample(sys, cfg.samples)
        return int(np.sum(dj.in_open_gap(sys, pts))), 0, "<="

    def dense():
        pts = dj.minimal_set_sample(sys, cfg.samples)
        grid = np.linspace(0.0, 1.0, 20_001)
        grid = grid[~dj.in_open_gap(sys, grid)]
        return dj.covering_radius(pts, grid), 1e-2, "<="

    def aperiodic():
        return dj.periodic_defect(f.forward, sys.omega), 1e-9, ">="

    return [
        Check("denjoy.gap_lengths", "gap I_n has length a_n", gap_lengths),
        Check("denjoy.gap_budget", "total gap length 1 - b - tail(N)", budget),
        Check("denjoy.semiconjugacy", "h o f = R o h", semiconj),
        Check("denjoy.inverse", "f^-1 o f = id", inverse),
        Check("denjoy.endpoint_map", "f(c_n) = c_{n+1}", endpoints),
        Check("denjoy.rotation_number", "rotation number equals omega", rotation),
        Check("denjoy.wandering", "I_0 is a wandering interval", wandering),
        Check("denjoy.monotone", "f strictly increasing on gaps and off gaps", monotone),
        Check("denjoy.minimal_outside_gaps", "minimal-set orbit avoids open gaps", outside_gaps),
        Check("denjoy.minimal_dense", "minimal-set orbit is dense off the gaps", dense),
        Check("denjoy.no_periodic_points", "no periodic points up to period 20", aperiodic),
    ]


# -- blow-ups ---------------------------------------------------------------------

def qpf_system(cfg: RunConfig) -> BlownUpSystem:
    mode = "oscillating" if cfg.construction == "qpf-filled" else cfg.pinch
    w = dj.WeightSequence(cfg.c, cfg.r, cfg.a0)
    b = default_qpf(mode, cfg.N, w, cfg.omega, cfg.theta_star, cfg.pinch_scale, cfg.lam)
    b.validate()
    return b


def general_system(cfg: RunConfig) -> BlownUpSystem:
    w = dj.WeightSequence(cfg.c, cfg.r, cfg.a0)
    return default_general(cfg.base, cfg.N, w, cfg.pinch_scale, lam=cfg.lam)


def blowup_checks(b: BlownUpSystem, cfg: RunConfig, prefix: str):
    """Blow-up properties that hold over any base."""
    rng = np.random.default_rng(cfg.seed)
    base = b.base
    trivial = b.N < 0
    tail = b.tail
    fib = base.random(rng, 100)
    xgrid = np.linspace(0.0, 1.0, 1000)
    TH = np.repeat(fib[:, None] if not base.point_shape else fib[:, None, :], xgrid.size, axis=1)
    X = np.broadcast_to(xgrid, (fib.shape[0], xgrid.size))
    pts_t = base.random(rng, 10_000)
    pts_x = rng.random(10_000)
    if not trivial:
        # add the blown-up fibres themselves to the monotonicity grids
        extra = np.stack([np.asarray(b.theta_n(n)) for n in range(-min(b.N, 5), min(b.N, 5) + 1)])
        TH = np.concatenate([TH, np.repeat(extra[:, None] if not base.point_shape else extra[:, None, :],
                                           xgrid.size, axis=1)])
        X = np.broadcast_to(xgrid, (TH.shape[0], xgrid.size))

    def fhat_monotone():
        _, x2 = b.fhat(TH, X)
        return inversions(x2, axis=1), 0, "<="

    def h_monotone():
        return int(np.sum(np.diff(b.h(TH, X), axis=1) < 0.0)), 0, "<="

    def injective():
        # off plateaus h is strictly increasing: every step of the grid moves h
        hv = b.h(TH, X)
        g = b.system.gamma(TH[:, :1] if not base.point_shape else TH[:, :1, :])
        dh = np.diff(hv, axis=1)
        on_curve = (np.abs(hv[:, 1:] - g) < 1e-12) & (np.abs(hv[:, :-1] - g) < 1e-12)
        return int(np.sum((dh <= 0.0) & ~on_curve)), 0, "<="

    def segments():
        if trivial:
            raise Skip("no blow-up")
        worst = 0.0
        for n in range(-min(10, b.N), min(10, b.N) + 1):
            _, lo, hi = b.segment(n)
            worst = max(worst, abs((hi - lo) - float(b.weights(n))))
        return worst, 2.0 * tail + 1e-12, "<="

    def segment_transport():
        if b.N < 1:
            raise Skip("needs N >= 1")
        worst = 0.0
        for n in range(-min(10, b.N), min(10, b.N)):
            th, lo, hi = b.segment(n)
            _, lo2, hi2 = b.segment(n + 1)
            _, img = b.fhat(np.array([th, th]) if not base.point_shape else np.stack([th, th]),
                            np.array([lo, hi]))
            worst = max(worst, abs(img[0] - lo2), abs(img[1] - hi2))
        return worst, 1e-8, "<="

    def semiconj():
        return b.semiconjugacy_residual(pts_t, pts_x), 1e-8 + 2.0 * tail, "<="

    def inverse():
        th2, x2 = b.fhat(pts_t, pts_x)
        _, x3 = b.fhat_inv(th2, x2)
        # the quantile tolerance is amplified by the steep parts of mu_theta
        return np.max(np.abs(x3 - pts_x)), 1e-7, "<="

    def pinching():
        if "pinching" not in certified_properties(base):
            raise Skip("base not minimal and almost periodic")
        g = generic_fibres(b, 100, np.random.default_rng(cfg.seed + 1))
        return float(np.max(b.preimage_width(g))), 1e-8, "<="

    def trivial_identity():
        if not trivial:
            raise Skip("blow-up enabled")
        return np.max(np.abs(b.h(pts_t[:1000], pts_x[:1000]) - pts_x[:1000])), 1e-11, "<="

    def reference():
        th = pts_t[:300]
        y = pts_x[:300]
        return np.max(np.abs(b.mu_cdf(th, y) - b.mu_cdf_reference(th, y))), 1e-12, "<="

    def normalisation():
        th = pts_t[:1000]
        ones = b.mu_cdf(th, np.ones(th.shape[0]))
        zeros = b.mu_cdf(th, np.zeros(th.shape[0]))
        return max(np.max(np.abs(ones - 1.0)), np.max(np.abs(zeros))), 1e-12, "<="

    return [
        Check(f"{prefix}.fhat_monotone", "fhat fibre maps strictly increasing", fhat_monotone),
        Check(f"{prefix}.h_monotone", "h fibre maps non-decreasing", h_monotone),
        Check(f"{prefix}.h_injective", "h injective off the preimage of the curve", injective),
        Check(f"{prefix}.segment_widths", "segment over theta*_n has length a_n", segments),
        Check(f"{prefix}.segment_transport", "fhat maps S_n onto S_{n+1}", segment_transport),
        Check(f"{prefix}.semiconjugacy", "h o fhat = f o h", semiconj),
        Check(f"{prefix}.inverse", "fhat^-1 o fhat = id", inverse),
        Check(f"{prefix}.pinching", "generic fibres of h^-1(curve) are points", pinching),
        Check(f"{prefix}.trivial_identity", "without blow-up h is the identity on fibres", trivial_identity),
        Check(f"{prefix}.mu_reference", "compiled fibre CDF matches step-by-step composition", reference),
        Check(f"{prefix}.mu_normalised", "mu_theta is a probability measure on [0, 1]", normalisation),
    ]


def circle_blowup_checks(b: BlownUpSystem, cfg: RunConfig, prefix: str = "qpf"):
    """Checks that need a circle-rotation base (jump, envelopes, chart, attractor)."""
    trivial = b.N < 0
    a0 = float(b.weights(0))
    one_sided = b.pinch.mode == "one-sided"
    ts = b.pinch.theta_star

    def invariance():
        th = np.linspace(0.0, 1.0, 1000, endpoint=False)
        return b.system.invariance_residual(th), 1e-10, "<="

    def curve_break():
        if trivial:
            raise Skip("no blow-up")
        worst = np.inf
        for delta in 10.0 ** -np.arange(2, 9):
            th = wrap(ts + np.linspace(-delta, delta, 101))
            th = th[~b.base.same(th, ts)]
            gp = b.gamma_plus(th)
            worst = min(worst, float(gp.max() - gp.min()))
        # a continuous invariant curve would force the oscillation to zero
        return worst, 0.5 * a0, ">=", "min oscillation of gamma+ over shrinking windows"

    def jump():
        if not one_sided:
            raise Skip("jump needs one-sided pinching")
        est = discontinuity_jump(b)
        expected = a0 if not trivial else 0.0
        return abs(est.jump - expected), 2.0 * b.tail + 1e-6, "<=", f"jump {est.jump:.12f}"

    def envelope():
        ts_, xs = b.minimal_set_sample(cfg.samples)
        env = filled_in_envelope(b, ts_, xs)
        if trivial:
            # without blow-up the minimal set is the curve itself
            return np.max(np.abs(xs - b.system.gamma(ts_))), 1e-12, "<=", env.verdict
        if one_sided:
            return env.margin, a0 / 4.0, ">=", env.verdict
        return env.coverage, 1e-2, "<=", env.verdict

    def minimal_on_curve():
        ts_, xs = b.minimal_set_sample(min(cfg.samples, 2000))
        return np.max(np.abs(b.h(ts_, xs) - b.system.gamma(ts_))), 1e-8, "<="

    def xi_monotone():
        chart = PinchedSetChart(b)
        t = np.linspace(0.0, 1.0, 10_000, endpoint=False)
        th, x = chart.xi(t)
        dth = np.diff(th)
        bad = int(np.sum(dth < 0.0) + np.sum((dth == 0.0) & (np.diff(x) >= 0.0)))
        back = np.max(np.abs(chart.xi_inv(th, x) - t))
        return bad + (back > 1e-9), 0, "<=", f"round trip {back:.2e}"

    def xi_rotation():
        chart = PinchedSetChart(b)
        rho = dj.rotation_number(chart.circle_lift, 2000, 0.1234)
        return abs(rho - b.base.omega), 2e-3, "<="

    def attractor_generic():
        if b.kind != 0:
            raise Skip("interval fibres only")
        g = generic_fibres(b, 50, np.random.default_rng(cfg.seed + 2))
        env = global_attractor(b, cfg.depth, g)
        return float(np.max(env.width())), 1e-3, "<="

    def attractor_star():
        if trivial:
            raise Skip("no blow-up")
        env = global_attractor(b, cfg.depth, np.array([ts]))
        return float(env.width()[0]), a0 - 1e-6, ">="

    def attractor_oracle():
        th = np.linspace(0.0, 1.0, 200, endpoint=False)
        env = global_attractor(b, cfg.depth, th)
        lo, hi = attractor_closed_form(b, cfg.depth, th)
        return max(np.max(np.abs(env.lower[-1] - lo)), np.max(np.abs(env.upper[-1] - hi))), 1e-8, "<="

    def truncation():
        if b.N < 1:
            raise Skip("needs N >= 1")
        rng = np.random.default_rng(cfg.seed + 3)
        th, x = rng.random(1000), rng.random(1000)
        ref = b.h(th, x)
        ks = [k for k in range(0, b.N + 1) if b.weights.tail(k) < 1e-6]
        k = ks[0] if ks else b.N
        return np.max(np.abs(b.h(th, x, k=k) - ref)), 1e-4, "<=", f"k = {k}"

    return [
        Check(f"{prefix}.curve_invariance", "f_theta(gamma(theta)) = gamma(theta + omega)", invariance),
        Check(f"{prefix}.no_continuous_curve", "gamma+ keeps oscillating near theta*", curve_break),
        Check(f"{prefix}.discontinuity_jump", "one-sided limits of mu_theta[0, gamma] differ by a_0", jump),
        Check(f"{prefix}.filled_in_envelope", "minimal set versus the segment over theta*", envelope),
        Check(f"{prefix}.minimal_on_curve", "minimal-set orbit lies in h^-1(curve)", minimal_on_curve),
        Check(f"{prefix}.xi_monotone", "xi is an order-preserving bijection", xi_monotone),
        Check(f"{prefix}.xi_rotation", "xi^-1 o fhat o xi has rotation number omega", xi_rotation),
        Check(f"{prefix}.attractor_generic_width", "attractor is thin over generic fibres", attractor_generic),
        Check(f"{prefix}.attractor_star_width", "attractor contains S_0", attractor_star),
        Check(f"{prefix}.attractor_oracle", "iterated envelopes match mu_theta[0, f^k(p)]", attractor_oracle),
        Check(f"{prefix}.truncation", "h^(k) converges to h", truncation),
    ]


def general_checks(b: BlownUpSystem, cfg: RunConfig):
    checks = blowup_checks(b, cfg, f"general.{cfg.base}")

    def syndetic():
        gaps = [return_gaps(b.base, eps) for eps in (0.1, 0.03)]
        return max(gaps), 10_000, "<=", f"return gaps {gaps}"

    def cross():
        if cfg.base != "rotation":
            raise Skip("circle base only")
        ref = default_qpf("one-sided", b.N, b.weights, cfg.omega, cfg.theta_star, cfg.pinch_scale, cfg.lam)
        worst = max(c.worst for c in cross_check_circle(ref))
        return worst, 1e-9, "<="

    checks += [
        Check(f"general.{cfg.base}.syndetic_returns", "returns to eps-neighbourhoods are syndetic", syndetic),
        Check(f"general.{cfg.base}.circle_cross_check", "independent orbit routes agree", cross),
    ]
    return checks


# -- gallery ------------------------------------------------------------------------

def sharkovsky_checks(cfg: RunConfig):
    w = dj.WeightSequence(cfg.c, cfg.r, cfg.a0)
    inner = default_qpf("one-sided", cfg.N, w, cfg.omega, cfg.theta_star, cfg.pinch_scale, cfg.lam)
    s = build_sharkovsky(inner)
    g = build_g()
    th = np.linspace(0.0, 1.0, 1000, endpoint=False)

    def g_cycle():
        return max(abs(g.iterate(c, 3) - c) for c in (0.0, 0.5, 1.0)), 0.0, "<="

    def g_fixed():
        fps = g.fixed_points()
        return abs(len(fps) - 1) + abs(sign_changes(g) - 1), 0, "<=", f"fixed points {fps}"

    def g_attracting():
        return abs(g.slope_at(s.x0)), 1.0 - 1e-12, "<="

    def boundary():
        return s.boundary_residual(np.linspace(0.0, 1.0, 10_000, endpoint=False)), 1e-8, "<="

    def cycle():
        return max(s.cycle_residual(th, 1), s.cycle_residual(th, 3)), 1e-9, "<="

    def monotone():
        X = np.linspace(s.a_minus, s.a_plus, 1000)
        T = np.repeat(th[::10, None], X.size, axis=1)
        _, y = s(T, np.broadcast_to(X, T.shape))
        return inversions(y, axis=1), 0, "<="

    def certificate():
        if cfg.N < 0:
            cert = certify_no_invariant_curve(s, cfg.depth)
            return cert.oscillation, 1e-6, "<=", "control run without blow-up"
        cert = certify_no_invariant_curve(s, cfg.depth)
        return cert.oscillation, cert.threshold, ">=", f"scale {cert.scale:.6f}"

    def control():
        ctrl = build_sharkovsky(default_qpf("one-sided", -1, w, cfg.omega, cfg.theta_star,
                                           cfg.pinch_scale, cfg.lam))
        return certify_no_invariant_curve(ctrl, cfg.depth).oscillation, 1e-6, "<="

    return [
        Check("sharkovsky.g_three_cycle", "g has the 3-cycle 0 -> 1/2 -> 1", g_cycle),
        Check("sharkovsky.g_unique_fixed_point", "g has exactly one fixed point", g_fixed),
        Check("sharkovsky.g_attracting", "the fixed point attracts (slope < 1)", g_attracting),
        Check("sharkovsky.boundary_continuity", "glued map continuous across the annulus boundary", boundary),
        Check("sharkovsky.three_cycle_curves", "constant curves 0, 1/2, 1 form a 3-cycle", cycle),
        Check("sharkovsky.fibre_monotone", "glued fibre maps increasing on the annulus", monotone),
        Check("sharkovsky.no_invariant_curve", "attractor envelope oscillates at theta*", certificate),
        Check("sharkovsky.control", "without blow-up the envelope is continuous", control),
    ]


def rees_system(cfg: RunConfig):
    w = dj.WeightSequence(cfg.c, cfg.r, cfg.a0)
    return build_rees(cfg.omega, cfg.rho, (cfg.theta_star, 0.5), w, cfg.N, cfg.pinch_scale)


def rees_pairs(r, seed: int, count: int = 100):
    rng = np.random.default_rng(seed)
    p = rng.random((count, 2))
    q = p.copy()
    q[:, 1] = wrap(q[:, 1] + 0.3)
    return p, q


def rees_checks(cfg: RunConfig, r=None):
    r = r or rees_system(cfg)
    rng = np.random.default_rng(cfg.seed)
    z = rng.random((10_000, 2))
    trivial = cfg.N < 0

    def semiconj():
        return r.semiconjugacy_residual(z), 1e-8, "<="

    def bijection():
        return r.bijection_residual(z), 1e-8, "<="

    def glue():
        return r.glue_residual(np.linspace(0.0, 1.0, 1000, endpoint=False)), 1e-8, "<="

    def segments():
        if trivial:
            raise Skip("no blow-up")
        worst = 0.0
        for n in range(-min(10, cfg.N), min(10, cfg.N) + 1):
            _, lo, hi = r.segment(n)
            worst = max(worst, abs((hi - lo) - float(r.bsys.weights(n))))
        return worst, 2.0 * r.bsys.tail + 1e-12, "<="

    def same_segment():
        if trivial:
            raise Skip("no blow-up")
        th, lo, hi = r.segment(0)
        p = np.array([[th, lo + 0.25 * (hi - lo)]])
        q = np.array([[th, lo + 0.75 * (hi - lo)]])
        K = min(40, cfg.N)
        rec = distality_probe(r, p, q, K)
        bound = max(float(r.bsys.weights(K)), float(r.bsys.weights(-K))) + 2.0 * r.bsys.tail
        return float(rec.two_sided[0]), bound, "<="

    def off_segment():
        p, q = rees_pairs(r, cfg.seed)
        rec = distality_probe(r, p, q, cfg.horizon)
        return float(rec.two_sided.min()), REES_DISTALITY_FLOOR, ">=", \
            f"one-sided min {rec.one_sided.min():.6f}"

    def floor_theory():
        p, q = rees_pairs(r, cfg.seed)
        rec = distality_probe(r, p, q, min(cfg.horizon, 200))
        dh = np.max(circle_dist(r.h(p), r.h(q)), axis=-1)
        return float(np.min(rec.two_sided - r.bsys.b_eff * dh)), -1e-12, ">=", \
            "orbit distance minus b' times the rotation distance"

    def base_exact():
        th2 = r.fhat(z[:1000])[:, 0]
        return np.max(circle_dist(th2, z[:1000, 0] + r.omega)), 1e-15, "<="

    return [
        Check("rees.semiconjugacy", "h o fhat = rotation o h", semiconj),
        Check("rees.bijection", "fhat^-1 o fhat = id", bijection),
        Check("rees.glue_continuity", "h and fhat continuous across the cut", glue),
        Check("rees.segment_widths", "segment over theta*_n has length a_n", segments),
        Check("rees.non_distal_segment", "points of one segment are proximal", same_segment),
        Check("rees.distal_control_pairs", "off-segment pairs stay apart", off_segment),
        Check("rees.distal_lower_bound", "orbit distance >= b' rotation distance", floor_theory),
        Check("rees.base_rotation", "first coordinate advances by omega", base_exact),
    ]


def checks_for(cfg: RunConfig):
    if cfg.construction == "denjoy":
        return denjoy_checks(cfg)
    if cfg.construction in ("qpf", "qpf-filled"):
        b = qpf_system(cfg)
        return blowup_checks(b, cfg, "qpf") + circle_blowup_checks(b, cfg, "qpf")
    if cfg.construction == "general":
        return general_checks(general_system(cfg), cfg)
    if cfg.construction == "sharkovsky":
        return sharkovsky_checks(cfg)
    if cfg.construction == "rees":
        return rees_checks(cfg)
    raise ValueError(cfg.construction)


def verify(cfg: RunConfig, workers: int = 4) -> VerificationReport:
    report = run_checks(checks_for(cfg), cfg.construction, cfg.digest(), cfg.seed, workers)
    if cfg.N < 0:
        report.notes.append("trivial case: blow-up disabled (N = -1), h is the identity on fibres")
    for r in report.results:
        if r.id.endswith("filled_in_envelope"):
            report.notes.append(f"envelope verdict: {r.note}")
    return report
