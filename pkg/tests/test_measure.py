import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blowup.measure import (
    DomainError,
    HybridMeasure,
    MonotoneMapOracle,
    OracleError,
    PreconditionError,
    atoms_plus_lebesgue,
    bisect_quantile,
    cdf,
    cdf_left,
    circle_dist,
    lebesgue,
    preimage_interval,
    pushforward,
    quantile,
    wrap,
)


@st.composite
def measures(draw):
    k = draw(st.integers(0, 5))
    cells = draw(st.lists(st.integers(1, 999), min_size=k, max_size=k, unique=True))
    pos = np.sort(np.array(cells, dtype=float)) / 1000.0
    w = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=k + 1, max_size=k + 1)))
    share = draw(st.floats(0.01, 0.9))
    mass = share * w[:k] / w.sum()
    return atoms_plus_lebesgue(pos, mass, 1.0 - mass.sum())


unit = st.floats(0.0, 1.0, allow_nan=False)


def test_wrap_never_returns_one():
    assert wrap(-1e-17) == 0.0
    assert wrap(1.0) == 0.0
    assert circle_dist(0.95, 0.05) == pytest.approx(0.1)


def test_mass_balance_enforced():
    with pytest.raises(ValueError, match="mass balance"):
        atoms_plus_lebesgue([0.5], [0.3], 0.5)
    # a certified tail may be missing
    atoms_plus_lebesgue([0.5], [0.3], 0.6, tail_bound=0.1)


def test_bad_atoms_rejected():
    with pytest.raises(ValueError, match="distinct"):
        atoms_plus_lebesgue([0.5, 0.5], [0.1, 0.1], 0.8)
    with pytest.raises(ValueError, match="positive"):
        atoms_plus_lebesgue([0.5], [0.0], 1.0)
    with pytest.raises(DomainError):
        atoms_plus_lebesgue([1.0], [0.5], 0.5, circle=True)


def test_domain_checked():
    m = lebesgue()
    with pytest.raises(DomainError):
        cdf(m, 1.5)
    with pytest.raises(DomainError):
        quantile(m, np.nan)


def test_single_atom_by_hand():
    m = atoms_plus_lebesgue([0.4], [0.5], 0.5)
    assert cdf(m, 0.4) == pytest.approx(0.7)
    assert cdf_left(m, 0.4) == pytest.approx(0.2)
    assert quantile(m, 0.2) == 0.4
    assert quantile(m, 0.45) == 0.4
    assert quantile(m, 0.7) == 0.4
    assert quantile(m, 0.9) == pytest.approx(0.8, abs=1e-11)
    assert quantile(m, 0.1) == pytest.approx(0.2, abs=1e-11)
    lo, hi = preimage_interval(m, np.array([0.4]))
    assert hi[0] - lo[0] == pytest.approx(0.5, abs=1e-15)


def test_quantile_needs_full_support():
    gappy = HybridMeasure(np.array([0.5]), np.array([0.5]),
                          lambda y: 0.5 * np.clip(2.0 * np.asarray(y) - 1.0, 0.0, 1.0))
    with pytest.raises(PreconditionError):
        quantile(gappy, 0.3)


def test_bisect_quantile_step_function():
    F = lambda y: (np.asarray(y) >= 0.3).astype(float)
    assert bisect_quantile(F, np.array([0.5]))[0] == pytest.approx(0.3, abs=1e-12)


@given(measures(), unit)
def test_galois_connection(m, x):
    q = float(quantile(m, x))
    assert float(cdf(m, q)) >= x - 1e-12
    assert float(cdf_left(m, q)) <= x + 1e-12


@given(measures(), unit, unit)
def test_quantile_monotone(m, x1, x2):
    lo, hi = sorted((x1, x2))
    assert quantile(m, lo) <= quantile(m, hi)


@given(measures())
def test_plateaus_have_atom_mass(m):
    if m.positions.size == 0:
        return
    lo, hi = preimage_interval(m, m.positions)
    np.testing.assert_allclose(hi - lo, m.masses, atol=2e-12)
    mid = 0.5 * (lo + hi)
    np.testing.assert_array_equal(quantile(m, mid), m.positions)


@given(measures(), unit, st.floats(0.2, 5.0))
def test_pushforward_under_power_map(m, y, k):
    g = MonotoneMapOracle(lambda z: np.asarray(z) ** k, lambda z: np.asarray(z) ** (1.0 / k))
    gm = pushforward(m, g)
    assert float(cdf(gm, y ** k)) == pytest.approx(float(cdf(m, y)), abs=1e-12)
    np.testing.assert_allclose(gm.masses, m.masses)


def test_pushforward_circle_rotation():
    m = atoms_plus_lebesgue([0.1, 0.7], [0.2, 0.1], 0.7, circle=True)
    beta = 0.45
    g = MonotoneMapOracle(lambda z: np.asarray(z) + beta, lambda z: np.asarray(z) - beta, circle=True)
    gm = pushforward(m, g)
    np.testing.assert_allclose(np.sort(gm.positions), np.sort(wrap(m.positions + beta)))
    # cut-anchored CDF: rotation moves the mass of [beta-ish] across 0
    y = np.linspace(0.0, 0.999, 50)
    ref = cdf(m, wrap(y - beta)) - cdf_left(m, wrap(-beta) * np.ones_like(y))
    ref = np.where(ref < 0, ref + 1.0, ref)
    np.testing.assert_allclose(cdf(gm, y), ref, atol=1e-12)


def test_pushforward_reports_bad_inverse():
    m = lebesgue()
    g = MonotoneMapOracle(lambda z: z, lambda z: np.full(np.shape(z), np.nan))
    with pytest.raises(OracleError):
        pushforward(m, g)
