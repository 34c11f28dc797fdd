import numpy as np
import pytest

from blowup.bases import CircleRotation, Odometer, TorusTranslation
from blowup.general import (
    certified_properties,
    cross_check_circle,
    default_general,
    default_sequences,
    generic_fibres,
    make_base,
    make_pinch_general,
    orbit_distance_to_blowups,
    set_distance,
)
from blowup.skew import ForcedIntervalSystem, PinchError


@pytest.fixture(scope="module")
def torus():
    return default_general("torus2")


@pytest.fixture(scope="module")
def odometer():
    return default_general("odometer")


@pytest.mark.parametrize("name", ["rotation", "torus2", "odometer"])
def test_sequences_converge_from_distinct_sets(name):
    base = make_base(name)
    seqs = default_sequences(base)
    seqs.check(base)
    dS = base.dist(seqs.S, seqs.theta_star)
    assert dS[-1] < dS[0]


def test_pinch_touches_only_on_closures():
    base = CircleRotation()
    s = ForcedIntervalSystem(base)
    seqs = default_sequences(base)
    p = make_pinch_general(base, s, seqs)
    np.testing.assert_array_equal(p.phi(seqs.S), s.gamma(seqs.S))
    np.testing.assert_array_equal(p.psi(seqs.T), s.gamma(seqs.T))
    assert np.all(p.phi(seqs.T) > s.gamma(seqs.T))
    assert p.phi(seqs.theta_star) == p.psi(seqs.theta_star)


def test_pinch_scale_too_large():
    base = CircleRotation()
    s = ForcedIntervalSystem(base)
    with pytest.raises(PinchError, match="try c"):
        make_pinch_general(base, s, default_sequences(base, c=5.0))


def test_set_distance_torus():
    t = TorusTranslation()
    pts = np.array([[0.0, 0.0], [0.5, 0.5]])
    assert set_distance(t, np.array([0.45, 0.52]), pts) == pytest.approx(0.05)


def test_certified_properties():
    assert "pinching" in certified_properties(Odometer())
    assert "pinching" not in certified_properties(CircleRotation(minimal=False))


@pytest.mark.parametrize("which", ["torus", "odometer"])
def test_blowup_over_general_base(which, request, rng):
    b = request.getfixturevalue(which)
    for n in (-3, 0, 4):
        th, lo, hi = b.segment(n)
        assert hi - lo == pytest.approx(float(b.weights(n)), abs=1e-15)
        assert b.blown_index(th) == n
    pts = b.base.random(rng, 500)
    x = rng.random(500)
    assert b.semiconjugacy_residual(pts, x) < 1e-10
    np.testing.assert_allclose(b.mu_cdf(pts[:50], x[:50]), b.mu_cdf_reference(pts[:50], x[:50]), atol=1e-13)
    g = generic_fibres(b, 10, rng)
    assert np.all(orbit_distance_to_blowups(b, g) > 1e-3)
    assert np.max(b.preimage_width(g)) < 1e-8


def test_circle_cross_check(qpf):
    checks = cross_check_circle(qpf, evaluations=300)
    assert {c.label for c in checks} == {"iterated-orbit", "torus-embedding"}
    assert max(c.worst for c in checks) < 1e-12
