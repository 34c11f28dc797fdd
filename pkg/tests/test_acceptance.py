"""The ten acceptance criteria at their stated sizes and tolerances.

Each test records a one-line summary that the terminal summary prints as a
pass/fail line per criterion.
"""

import numpy as np
import pytest

from blowup import denjoy as dj
from blowup.gallery import build_rees, build_sharkovsky, certify_no_invariant_curve, distality_probe
from blowup.general import cross_check_circle, default_general, generic_fibres
from blowup.measure import (
    MonotoneMapOracle,
    atoms_plus_lebesgue,
    cdf,
    cdf_left,
    circle_dist,
    preimage_interval,
    pushforward,
    quantile,
    wrap,
)
from blowup.skew import (
    PinchedSetChart,
    default_qpf,
    discontinuity_jump,
    filled_in_envelope,
    global_attractor,
)
from blowup.verify import REES_DISTALITY_FLOOR, inversions, overlapping_arcs, rees_pairs

pytestmark = pytest.mark.acceptance

TAIL = dj.WeightSequence().tail(40)


def note(record_property, n, title, detail):
    record_property("criterion", n)
    record_property("title", title)
    record_property("detail", detail)


def random_measure(rng):
    k = rng.integers(0, 6)
    pos = np.sort(rng.choice(np.arange(1, 1000), size=k, replace=False) / 1000.0 + rng.random(k) * 1e-4)
    mass = rng.dirichlet(np.ones(k + 1)) * rng.uniform(0.05, 0.9)
    m = atoms_plus_lebesgue(pos, mass[:k], 1.0 - mass[:k].sum())
    return m


def random_homeo(rng):
    xs = np.concatenate([[0.0], np.sort(rng.random(4)), [1.0]])
    ys = np.concatenate([[0.0], np.sort(rng.random(4)), [1.0]])
    ys = np.maximum.accumulate(ys + np.linspace(0, 1e-3, 6)) / (1.0 + 1e-3)
    ys[-1] = 1.0
    return MonotoneMapOracle(lambda z: np.interp(z, xs, ys), lambda z: np.interp(z, ys, xs))


def test_1_quantile_engine(record_property):
    rng = np.random.default_rng(1)
    galois = push_cdf = push_q = plateau = 0.0
    violations = 0
    for _ in range(1000):
        m = random_measure(rng)
        x, y = rng.random(2)
        q = float(quantile(m, x))
        # x <= F(Q(x)) and F(Q(x)-) <= x characterise Q as the lower adjoint of F
        galois = max(galois, x - float(cdf(m, q)), float(cdf_left(m, q)) - x)
        clear = abs(x - float(cdf(m, y))) > 1e-9 and abs(q - y) > 1e-9
        violations += clear and ((q <= y) != (x <= float(cdf(m, y))))
        g = random_homeo(rng)
        gm = pushforward(m, g)
        push_cdf = max(push_cdf, abs(float(cdf(gm, g(y))) - float(cdf(m, y))))
        push_q = max(push_q, abs(float(quantile(gm, x)) - float(g(q))))
        if m.positions.size:
            lo, hi = preimage_interval(m, m.positions)
            plateau = max(plateau, float(np.max(np.abs((hi - lo) - m.masses))))
    note(record_property, 1, "quantile/cdf engine",
         f"galois {galois:.1e}, violations {violations}, push-forward cdf {push_cdf:.1e} "
         f"quantile {push_q:.1e} (< 1e-9); plateau {plateau:.1e} (<= 2e-12)")
    assert galois < 1e-9 and violations == 0
    assert push_cdf < 1e-9 and push_q < 1e-9
    assert plateau <= 2e-12


def test_2_denjoy(record_property, denjoy_sys):
    s = denjoy_sys
    f = dj.denjoy_map(s)
    h = dj.denjoy_h(s)
    ys = np.random.default_rng(2).random(10_000)
    semi = float(np.max(circle_dist(h(f(ys)), wrap(h(ys) + s.omega))))
    rho = dj.rotation_number(f.forward, 10_000)
    overlaps = overlapping_arcs(dj.gap_images(s, 0, 100))
    total = float(np.sum(s.d - s.c))
    note(record_property, 2, "denjoy",
         f"semiconjugacy {semi:.1e} (< 1e-9); rotation {rho:.6f} vs {s.omega:.6f}; "
         f"overlapping gap images {overlaps}; gap sum {total:.12f}")
    assert semi < 1e-9
    assert abs(rho - s.omega) <= 2e-3
    assert overlaps == 0
    assert abs(total - 0.5) <= 1e-9


def blowup_suite(b, seed):
    """Inversions, segment widths, semiconjugacy and generic pinching."""
    rng = np.random.default_rng(seed)
    base = b.base
    fib = base.random(rng, 100)
    xg = np.linspace(0.0, 1.0, 1000)
    TH = np.repeat(np.expand_dims(fib, 1), xg.size, axis=1)
    X = np.broadcast_to(xg, (100, xg.size))
    _, fx = b.fhat(TH, X)
    hx = b.h(TH, X)
    out = {
        "fhat_inversions": inversions(fx, axis=1),
        "h_inversions": int(np.sum(np.diff(hx, axis=1) < 0.0)),
    }
    widths = []
    for n in range(-10, 11):
        _, lo, hi = b.segment(n)
        widths.append(abs((hi - lo) - float(b.weights(n))))
    out["width_error"] = max(widths)
    out["semiconjugacy"] = b.semiconjugacy_residual(base.random(rng, 10_000), rng.random(10_000))
    g = generic_fibres(b, 50, rng)
    out["pinch_width"] = float(np.max(b.preimage_width(g)))
    return out


def blowup_ok(r, tail):
    return (r["fhat_inversions"] == 0 and r["h_inversions"] == 0
            and r["width_error"] <= 2 * tail + 1e-12
            and r["semiconjugacy"] < 1e-8 + 2 * tail
            and r["pinch_width"] <= 1e-8)


def describe(r):
    return (f"inversions {r['fhat_inversions']}/{r['h_inversions']}, width err {r['width_error']:.1e}, "
            f"semiconjugacy {r['semiconjugacy']:.1e}, pinch width {r['pinch_width']:.1e}")


def test_3_blowup_properties(record_property, qpf):
    r = blowup_suite(qpf, 3)
    note(record_property, 3, "blow-up properties", describe(r))
    assert blowup_ok(r, qpf.tail)


def test_4_discontinuity_jump(record_property, qpf):
    est = discontinuity_jump(qpf)
    control = discontinuity_jump(default_qpf(N=-1))
    note(record_property, 4, "discontinuity jump",
         f"jump {est.jump:.12f} (0.25 +- 1e-6), control {control.jump:.1e}")
    assert abs(est.jump - 0.25) <= 1e-6
    assert abs(control.jump) <= 1e-6


def test_5_filled_in_envelope(record_property, qpf, qpf_osc):
    env = filled_in_envelope(qpf, *qpf.minimal_set_sample(100_000))
    osc = filled_in_envelope(qpf_osc, *qpf_osc.minimal_set_sample(100_000))
    note(record_property, 5, "filled-in envelope",
         f"one-sided margin {env.margin:.4f} (>= 0.0625) '{env.verdict}'; "
         f"oscillating coverage {osc.coverage:.2e} (<= 1e-2) '{osc.verdict}'")
    assert env.margin >= 0.0625 and env.verdict == "non-filled-in evidence"
    assert osc.coverage <= 1e-2 and osc.verdict == "filled-in evidence"


def test_6_xi_chart(record_property, qpf):
    chart = PinchedSetChart(qpf)
    t = np.linspace(0.0, 1.0, 10_000, endpoint=False)
    th, x = chart.xi(t)
    dth, dx = np.diff(th), np.diff(x)
    # order on the pinched set: by angle, and downwards along a segment
    order_breaks = int(np.sum(dth < 0.0) + np.sum((dth == 0.0) & (dx >= 0.0)))
    back = float(np.max(np.abs(chart.xi_inv(th, x) - t)))
    rho = dj.rotation_number(chart.circle_lift, 2000, 0.1234)
    note(record_property, 6, "xi chart",
         f"order breaks {order_breaks}, round trip {back:.1e}, rotation {rho:.6f}")
    assert order_breaks == 0
    assert back < 1e-9
    assert abs(rho - qpf.base.omega) <= 2e-3


def test_7_attractor(record_property, qpf):
    g = generic_fibres(qpf, 100, np.random.default_rng(7))
    generic = float(np.max(global_attractor(qpf, 30, g).width()))
    star = float(global_attractor(qpf, 30, np.array([qpf.pinch.theta_star])).width()[0])
    a0 = float(qpf.weights(0))
    note(record_property, 7, "attractor", f"generic width {generic:.1e} (< 1e-3), width at theta* {star:.9f}")
    assert generic < 1e-3
    assert star >= a0 - 1e-6


def test_8_general_bases(record_property, qpf):
    torus = blowup_suite(default_general("torus2"), 8)
    odo = blowup_suite(default_general("odometer"), 8)
    cross = cross_check_circle(qpf, evaluations=1000)
    worst = max(c.worst for c in cross)
    note(record_property, 8, "general bases",
         f"torus [{describe(torus)}]; odometer [{describe(odo)}]; cross-check {worst:.1e}")
    assert blowup_ok(torus, TAIL)
    assert blowup_ok(odo, TAIL)
    assert worst <= 1e-9


def test_9_sharkovsky(record_property, qpf):
    s = build_sharkovsky(qpf)
    th = np.linspace(0.0, 1.0, 1000, endpoint=False)
    cycle = s.cycle_residual(th, 3)
    cert = certify_no_invariant_curve(s, 30)
    control = certify_no_invariant_curve(build_sharkovsky(default_qpf(N=-1)), 30)
    note(record_property, 9, "sharkovsky surgery",
         f"3-cycle {cycle:.1e}; oscillation {cert.oscillation:.5f} >= {cert.threshold:.5f}; "
         f"control {control.oscillation:.1e}")
    assert cycle < 1e-9
    assert cert.oscillation >= 0.8 * float(qpf.weights(0)) * cert.scale
    assert control.oscillation < 1e-6


def test_10_rees(record_property):
    r = build_rees()
    b = r.bsys
    glue = r.glue_residual(np.linspace(0.0, 1.0, 1000, endpoint=False))
    same = []
    for n in (-5, 0, 5):
        th, lo, hi = r.segment(n)
        rec = distality_probe(r, [[th, lo + 0.25 * (hi - lo)]], [[th, lo + 0.75 * (hi - lo)]], 40)
        bound = float(b.weights(40 - abs(n))) + 2 * b.tail
        same.append((float(rec.two_sided[0]), bound))
    p, q = rees_pairs(r, 0)
    ctrl = distality_probe(r, p, q, 1000)
    floor = float(ctrl.two_sided.min())
    note(record_property, 10, "rees",
         f"glue {glue:.1e}; same-segment minima {[f'{d:.1e}' for d, _ in same]}; "
         f"control floor {floor:.4f} (regression >= {REES_DISTALITY_FLOOR})")
    assert glue < 1e-8
    assert all(d <= bound for d, bound in same)
    assert floor > 0.0 and floor >= REES_DISTALITY_FLOOR
