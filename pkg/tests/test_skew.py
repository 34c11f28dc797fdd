import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blowup import _kernels as K
from blowup.bases import CircleRotation
from blowup.denjoy import WeightSequence
from blowup.measure import PreconditionError
from blowup.skew import (
    BlownUpSystem,
    ForcedIntervalSystem,
    PinchError,
    PinchFunctions,
    PinchedSetChart,
    _pl_forward,
    _pl_inverse,
    attractor_closed_form,
    default_qpf,
    discontinuity_jump,
    global_attractor,
    hat_curve,
    one_sided_pinch,
)

unit = st.floats(0.0, 1.0)
curve_vals = st.floats(0.3, 0.7)


@given(unit, curve_vals, curve_vals)
def test_fibre_map_inverse(x, g0, g1):
    y = _pl_forward(np.array(x), g0, g1, 0.5, 0.25, 0.75)
    assert float(_pl_inverse(y, g0, g1, 0.5, 0.25, 0.75)) == pytest.approx(x, abs=1e-12)
    assert K.fibre_forward(x, g0, g1, 0.5, 0.25, 0.75) == pytest.approx(float(y), abs=1e-15)
    assert K.fibre_inverse(float(y), g0, g1, 0.5, 0.25, 0.75) == pytest.approx(x, abs=1e-12)


@given(unit, unit, curve_vals, curve_vals)
def test_fibre_map_increasing(x1, x2, g0, g1):
    lo, hi = sorted((x1, x2))
    a, b = _pl_forward(np.array([lo, hi]), g0, g1, 0.5, 0.25, 0.75)
    assert a <= b


def test_curve_invariant_and_annulus_trapped():
    s = ForcedIntervalSystem()
    th = np.linspace(0.0, 1.0, 1000, endpoint=False)
    assert s.invariance_residual(th) < 1e-15
    assert s.contraction_margin(th) > 0.0
    assert hat_curve(0.0) == pytest.approx(0.55)
    assert hat_curve(0.5) == pytest.approx(0.45)


def test_system_rejects_bad_parameters():
    with pytest.raises(ValueError):
        ForcedIntervalSystem(lam=1.5)


def test_pinch_check():
    s = ForcedIntervalSystem()
    th = np.linspace(0.0, 1.0, 500, endpoint=False)
    one_sided_pinch(s).check(s, th)
    with pytest.raises(PinchError, match="unit interval"):
        one_sided_pinch(s, c=0.6).check(s, th)
    flipped = PinchFunctions(0.3, lambda t: s.gamma(t) - 0.1, lambda t: s.gamma(t) + 0.1)
    with pytest.raises(PinchError, match="violated"):
        flipped.check(s, th)


def test_one_sided_pinch_geometry():
    s = ForcedIntervalSystem()
    p = one_sided_pinch(s, 0.3, 0.35, 0.1)
    left = np.array([0.25, 0.29])
    right = np.array([0.31, 0.35])
    np.testing.assert_array_equal(p.phi(left), s.gamma(left))
    np.testing.assert_array_equal(p.psi(right), s.gamma(right))
    assert np.all(p.phi(right) > s.gamma(right))
    assert np.all(p.psi(left) < s.gamma(left))


def test_validate_catches_periodic_blowup():
    s = ForcedIntervalSystem(CircleRotation(0.25))
    b = BlownUpSystem(s, one_sided_pinch(s))
    with pytest.raises(Exception):
        b.validate()


def test_kernel_matches_reference(qpf, rng):
    th = np.concatenate([rng.random(200), qpf.theta_n(np.arange(-6, 7))])
    y = rng.random(th.size)
    np.testing.assert_allclose(qpf.mu_cdf(th, y), qpf.mu_cdf_reference(th, y), atol=1e-13)


def test_fibre_measures_are_probabilities(qpf, rng):
    th = rng.random(100)
    np.testing.assert_allclose(qpf.mu_cdf(th, np.ones(100)), 1.0, atol=1e-14)
    np.testing.assert_allclose(qpf.mu_cdf(th, np.zeros(100)), 0.0, atol=1e-14)


def test_segments(qpf):
    for n in (-12, -1, 0, 1, 7):
        th, lo, hi = qpf.segment(n)
        assert hi - lo == pytest.approx(float(qpf.weights(n)), abs=1e-15)
        assert qpf.blown_index(th) == n
        mid = np.array([0.5 * (lo + hi)])
        # the whole segment is collapsed onto the curve
        assert float(qpf.h(th, mid)[0]) == float(qpf.system.gamma(th))
    with pytest.raises(ValueError):
        qpf.segment(41)
    assert qpf.blown_index(0.123) == qpf.N + 1


def test_fhat_maps_segment_to_segment(qpf):
    th, lo, hi = qpf.segment(3)
    th2, img = qpf.fhat(np.array([th, th]), np.array([lo, hi]))
    _, lo2, hi2 = qpf.segment(4)
    np.testing.assert_allclose(img, [lo2, hi2], atol=1e-12)


def test_semiconjugacy_and_inverse(qpf, rng):
    th, x = rng.random(2000), rng.random(2000)
    assert qpf.semiconjugacy_residual(th, x) < 1e-10
    th2, x2 = qpf.fhat(th, x)
    _, x3 = qpf.fhat_inv(th2, x2)
    assert np.max(np.abs(x3 - x)) < 1e-7


def test_truncated_h_converges(qpf, rng):
    th, x = rng.random(500), rng.random(500)
    full = qpf.h(th, x)
    errs = [np.max(np.abs(qpf.h(th, x, k=k) - full)) for k in (2, 6, 12)]
    assert errs[0] > errs[1] > errs[2]
    with pytest.raises(ValueError):
        qpf.h(th, x, k=qpf.N + 1)


def test_control_run_is_identity(rng):
    b = default_qpf(N=-1)
    th, x = rng.random(300), rng.random(300)
    np.testing.assert_allclose(b.h(th, x), x, atol=1e-11)
    assert discontinuity_jump(b).jump == pytest.approx(0.0, abs=1e-12)


def test_jump_needs_one_sided(qpf_osc):
    with pytest.raises(Exception):
        discontinuity_jump(qpf_osc)


def test_jump_scales_with_a0():
    b = default_qpf(weights=WeightSequence(a0=0.1))
    assert discontinuity_jump(b).jump == pytest.approx(0.1, abs=1e-6)


def test_preimage_width_on_blown_fibre(qpf):
    th = qpf.theta_n(np.array([0, 2]))
    np.testing.assert_allclose(qpf.preimage_width(th), qpf.weights(np.array([0, 2])), atol=1e-10)


def test_minimal_set_routes_agree(qpf):
    t1, x1 = qpf.minimal_set_sample(41)
    t2, x2 = qpf.minimal_set_sample(41, method="iterate")
    np.testing.assert_allclose(t1, t2, atol=1e-12)
    np.testing.assert_allclose(x1, x2, atol=1e-7)


def test_chart_inverts(qpf):
    chart = PinchedSetChart(qpf)
    t = np.linspace(0.0, 1.0, 777, endpoint=False)
    th, x = chart.xi(t)
    np.testing.assert_allclose(chart.xi_inv(th, x), t, atol=1e-12)
    assert chart.eta_jump(0) == pytest.approx(0.25, abs=1e-15)


def test_attractor_matches_closed_form(qpf):
    th = np.linspace(0.0, 1.0, 64, endpoint=False)
    env = global_attractor(qpf, 12, th)
    lo, hi = attractor_closed_form(qpf, 12, th)
    np.testing.assert_allclose(env.lower[-1], lo, atol=1e-9)
    np.testing.assert_allclose(env.upper[-1], hi, atol=1e-9)


def test_attractor_shrinks_on_generic_fibres(qpf):
    th = np.array([0.05, 0.61, 0.83])
    w = [np.max(global_attractor(qpf, d, th).width()) for d in (5, 10, 20)]
    assert w[0] > w[1] > w[2]


def test_attractor_rejects_circle_fibres():
    from blowup.gallery import build_rees
    with pytest.raises(PreconditionError):
        global_attractor(build_rees(N=5).bsys, 3, np.array([0.1]))
