import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blowup import denjoy as dj
from blowup.measure import circle_dist, wrap
from blowup.verify import overlapping_arcs


def test_default_weights():
    w = dj.WeightSequence()
    assert w.first == 0.25
    assert w.total == pytest.approx(0.5, abs=1e-15)
    assert w.b == pytest.approx(0.5, abs=1e-15)
    assert w.tail(40) < 1e-18
    assert w.tail(-1) == w.total
    assert w.partial(3) == pytest.approx(float(np.sum(w(np.arange(-3, 4)))), abs=1e-15)


def test_weights_override_and_errors():
    assert dj.WeightSequence(a0=0.1)(0) == 0.1
    with pytest.raises(ValueError):
        dj.WeightSequence(c=0.5, r=0.5)
    with pytest.raises(ValueError):
        dj.WeightSequence(r=1.0)


def test_rational_rotation_rejected():
    with pytest.raises(dj.RationalityError):
        dj.check_irrational(0.375)
    assert dj.check_irrational(dj.GOLDEN) > 1e-7


def test_basepoint_on_cut_rejected():
    with pytest.raises(dj.BasepointError, match="try x0"):
        dj.DenjoySystem.build(x0=wrap(-3 * dj.GOLDEN), N=5)


def test_gap_table(denjoy_sys):
    s = denjoy_sys
    np.testing.assert_allclose(s.d - s.c, s.a, atol=1e-15)
    # gap order on the circle follows the orbit order of x_n
    np.testing.assert_array_equal(np.argsort(s.c), np.argsort(s.x(s.n)))
    n, inside = s.gap_index(0.5 * (s.c + s.d))
    assert inside.all()
    np.testing.assert_array_equal(n, s.n)


def test_untruncated_control_is_rotation():
    s = dj.DenjoySystem.build(N=-1)
    f = dj.denjoy_map(s)
    y = np.linspace(0.0, 1.0, 101, endpoint=False)
    np.testing.assert_allclose(circle_dist(f(y), y + s.omega), 0.0, atol=1e-11)


def test_endpoints_shift(denjoy_sys):
    s = denjoy_sys
    f = dj.denjoy_map(s)
    np.testing.assert_allclose(circle_dist(f(s.c[:-1]), s.c[1:]), 0.0, atol=1e-14)
    np.testing.assert_allclose(circle_dist(f(s.d[:-1]), s.d[1:]), 0.0, atol=1e-14)


@given(st.floats(0.0, 1.0, exclude_max=True))
def test_semiconjugacy_pointwise(y):
    s = _SYS
    f = dj.denjoy_map(s)
    h = dj.denjoy_h(s)
    y = np.array([y])
    assert circle_dist(h(f(y)), h(y) + s.omega)[0] < 1e-9
    assert circle_dist(f.inv(f(y)), y)[0] < 1e-9


_SYS = dj.DenjoySystem.build()


def test_h_collapses_gaps(denjoy_sys):
    s = denjoy_sys
    h = dj.denjoy_h(s)
    for n in (-3, 0, 2):
        i = n + s.N
        ys = np.linspace(s.c[i], s.d[i], 7)
        np.testing.assert_allclose(circle_dist(h(ys), s.x(n)), 0.0, atol=1e-11)


def test_minimal_set_routes_agree(denjoy_sys):
    a = dj.minimal_set_sample(denjoy_sys, 60)
    b = dj.minimal_set_sample(denjoy_sys, 60, method="iterate")
    assert np.max(circle_dist(a, b)) < 1e-9
    assert not dj.in_open_gap(denjoy_sys, a).any()


def test_gap_images_are_disjoint(denjoy_sys):
    assert overlapping_arcs(dj.gap_images(denjoy_sys, 0, 100)) == 0


def test_overlap_counter_sees_overlaps():
    ends = np.array([[0.1, 0.3], [0.2, 0.4], [0.9, 0.05], [0.5, 0.6]])
    # [0.1,0.3]~[0.2,0.4] and the wrapped arc [0.9,0.05] touches neither
    assert overlapping_arcs(ends) == 1
    assert overlapping_arcs(np.array([[0.95, 0.15], [0.1, 0.2]])) == 1


def test_rotation_number_of_rotation():
    assert dj.rotation_number(dj.rotation_lift(0.3), 100) == pytest.approx(0.3)


def test_no_short_periods(denjoy_sys):
    f = dj.denjoy_map(denjoy_sys)
    assert dj.periodic_defect(f.forward, denjoy_sys.omega, qmax=10) > 1e-3
    # a rigid rotation by 2/5 returns after 5 steps
    assert dj.periodic_defect(dj.rotation_lift(0.4), 0.4, qmax=5) < 1e-12


def test_minimal_set_dense_off_gaps(denjoy_sys):
    pts = dj.minimal_set_sample(denjoy_sys, 20_000)
    grid = np.linspace(0.0, 1.0, 5001)
    grid = grid[~dj.in_open_gap(denjoy_sys, grid)]
    assert dj.covering_radius(pts, grid) < 1e-3
