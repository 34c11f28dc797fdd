import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blowup.bases import (
    AperiodicityError,
    CircleRotation,
    IteratedRotation,
    Odometer,
    TorusTranslation,
    check_aperiodic,
    check_rationally_independent,
    return_gaps,
    van_der_corput,
)

u64 = st.integers(0, 2**64 - 1)


@given(u64, st.integers(-1000, 1000))
def test_odometer_step_is_modular_addition(a, k):
    o = Odometer()
    assert int(o.step(np.uint64(a), k)) == (a + k) % 2**64


@given(u64, u64)
def test_odometer_metric(a, b):
    o = Odometer()
    d = float(o.dist(np.uint64(a), np.uint64(b)))
    if a == b:
        assert d == 0.0
    else:
        k = ((a ^ b) & -(a ^ b)).bit_length() - 1
        assert d == 2.0 ** -k


@given(u64, u64, st.integers(-50, 50))
def test_odometer_isometry(a, b, k):
    o = Odometer()
    assert o.dist(o.step(np.uint64(a), k), o.step(np.uint64(b), k)) == o.dist(np.uint64(a), np.uint64(b))


def test_odometer_orbit_matches_steps():
    o = Odometer()
    th = np.uint64(2**64 - 3)
    orb = o.orbit(th, 4)
    for i, k in enumerate(range(-4, 5)):
        assert orb[i] == o.step(th, k)


def test_van_der_corput():
    assert van_der_corput(np.uint64(1)) == 0.5
    assert van_der_corput(np.uint64(2)) == 0.25
    assert van_der_corput(np.uint64(3)) == 0.75


def test_iterated_orbit_agrees():
    th = np.array([0.1, 0.77])
    a = CircleRotation().orbit(th, 30)
    b = IteratedRotation().orbit(th, 30)
    d = np.abs(a - b)
    assert np.max(np.minimum(d, 1 - d)) < 1e-13


def test_torus_shapes_and_metric():
    t = TorusTranslation()
    p = np.array([[0.1, 0.95]])
    assert t.orbit(p, 3).shape == (1, 7, 2)
    assert t.dist(p, np.array([0.15, 0.05])) == pytest.approx(0.1)
    t.validate()


def test_rational_dependence_detected():
    with pytest.raises(ValueError, match="rationally dependent"):
        check_rationally_independent(0.1 * np.sqrt(2), 0.3 * np.sqrt(2))


def test_periodic_blowup_point_rejected():
    with pytest.raises(AperiodicityError):
        check_aperiodic(CircleRotation(0.2), 0.3, horizon=100)
    check_aperiodic(CircleRotation(), 0.3, horizon=10_000)
    check_aperiodic(Odometer(), np.uint64(5))


def test_return_gaps_finite():
    assert return_gaps(CircleRotation(), 0.1) < 20
    assert return_gaps(Odometer(), 0.1) == 16
    assert return_gaps(TorusTranslation(), 0.1) < 200
