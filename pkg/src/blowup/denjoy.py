"""Denjoy circle homeomorphisms obtained by blowing up one rotation orbit.

The blow-up measure ``nu = sum_n a_n delta_{x_n} + b Leb`` has atoms on the
orbit ``x_n = x_0 + n omega``; its quantile ``h`` collapses each gap
``I_n = [c_n, d_n]`` to ``x_n`` and the Denjoy map is ``h^{-1} o R o h`` off
the gaps, affine from ``I_n`` onto ``I_{n+1}`` on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .measure import (
    HybridMeasure,
    MonotoneMapOracle,
    atoms_plus_lebesgue,
    cdf,
    cdf_left,
    circle_dist,
    quantile,
    wrap,
)

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0

# points this close to a gap are mapped by the affine gap branch; this keeps
# iterated gap endpoints from drifting to the wrong side of an atom
EDGE_SLACK = 1e-15


class BasepointError(ValueError):
    """The blow-up orbit passes through the cut point 0."""


class RationalityError(ValueError):
    """Rotation angle (numerically) rational."""


@dataclass(frozen=True)
class WeightSequence:
    """Geometric weights ``a_n = c r^|n|`` with an optional override of ``a_0``."""

    c: float = 0.25
    r: float = 1.0 / 3.0
    a0: float | None = None

    def __post_init__(self):
        if not (self.c > 0.0 and 0.0 < self.r < 1.0):
            raise ValueError("need c > 0 and 0 < r < 1")
        if self.a0 is not None and self.a0 <= 0.0:
            raise ValueError("a0 must be positive")
        if not self.total < 1.0:
            raise ValueError(f"weights sum to {self.total} >= 1")

    @property
    def first(self) -> float:
        return self.c if self.a0 is None else self.a0

    def __call__(self, n):
        n = np.asarray(n)
        a = self.c * self.r ** np.abs(n).astype(float)
        return np.where(n == 0, self.first, a)

    @property
    def total(self) -> float:
        return self.first + 2.0 * self.c * self.r / (1.0 - self.r)

    @property
    def b(self) -> float:
        return 1.0 - self.total

    def tail(self, N: int) -> float:
        """Mass of the weights with ``|n| > N``."""
        if N < 0:
            return self.total
        return 2.0 * self.c * self.r ** (N + 1) / (1.0 - self.r)

    def partial(self, N: int) -> float:
        return self.total - self.tail(N)

    def scaled(self, factor: float) -> "WeightSequence":
        return WeightSequence(self.c * factor, self.r,
                              None if self.a0 is None else self.a0 * factor)


def check_irrational(omega: float, horizon: int = 10**6, tol: float = 1e-12) -> float:
    """Smallest ``|q omega - p|`` over ``1 <= q <= horizon``; raises below ``tol``."""
    q = np.arange(1, horizon + 1, dtype=float)
    gap = float(circle_dist(q * omega, 0.0).min())
    if gap <= tol:
        raise RationalityError(f"omega={omega!r} has a period <= {horizon} (gap {gap:.2e})")
    return gap


def build_nu(omega: float, x0: float, weights: WeightSequence, N: int,
             validate: bool = True) -> HybridMeasure:
    """Blow-up measure on the circle with atoms ``a_n`` at ``x0 + n omega``, ``|n| <= N``.

    Dropped atoms are folded into the Lebesgue coefficient, ``b' = b + tail(N)``.
    ``N = -1`` gives Lebesgue measure.
    """
    if validate:
        check_irrational(omega)
    if N < 0:
        return atoms_plus_lebesgue([], [], 1.0, circle=True)
    n = np.arange(-N, N + 1)
    xs = wrap(x0 + n * omega)
    miss = circle_dist(xs, 0.0)
    if miss.min() < 1e-9:
        k = int(n[np.argmin(miss)])
        raise BasepointError(
            f"orbit point x_{k} = {xs[np.argmin(miss)]:.3e} sits on the cut; "
            f"try x0 = {wrap(x0 + 1e-3 * (np.sqrt(2) - 1)):.12f}")
    return atoms_plus_lebesgue(xs, weights(n), weights.b + weights.tail(N), circle=True)


@dataclass(frozen=True)
class DenjoySystem:
    omega: float
    x0: float
    weights: WeightSequence
    N: int
    nu: HybridMeasure
    n: np.ndarray       # gap indices, sorted by n
    c: np.ndarray       # left gap endpoints
    d: np.ndarray       # right gap endpoints
    a: np.ndarray       # weights a_n

    @classmethod
    def build(cls, omega: float = GOLDEN, x0: float = 0.1,
              weights: WeightSequence | None = None, N: int = 40,
              validate: bool = True) -> "DenjoySystem":
        weights = weights or WeightSequence()
        nu = build_nu(omega, x0, weights, N, validate)
        n = np.arange(-N, N + 1) if N >= 0 else np.empty(0, dtype=int)
        xs = wrap(x0 + n * omega)
        c = cdf_left(nu, xs) if n.size else np.empty(0)
        d = cdf(nu, xs) if n.size else np.empty(0)
        return cls(omega, x0, weights, N, nu, n, c, d, weights(n) if n.size else np.empty(0))

    @property
    def b_eff(self) -> float:
        return self.weights.b + self.weights.tail(self.N)

    def x(self, n):
        return wrap(self.x0 + np.asarray(n) * self.omega)

    def gap_index(self, y):
        """Index ``n`` of the closed gap containing ``y`` and a mask of hits."""
        y = np.asarray(y, dtype=float)
        if self.n.size == 0:
            return np.zeros(y.shape, dtype=int), np.zeros(y.shape, dtype=bool)
        order = np.argsort(self.c)
        cs, ds, ns = self.c[order], self.d[order], self.n[order]
        i = np.searchsorted(cs, y + EDGE_SLACK, side="right") - 1
        ic = np.clip(i, 0, None)
        inside = (i >= 0) & (y <= ds[ic] + EDGE_SLACK)
        return ns[ic], inside


def _lifted_cdf(nu: HybridMeasure, z, left=False):
    k = np.floor(z)
    s = np.clip(z - k, 0.0, 1.0)
    return k + (cdf_left(nu, s) if left else cdf(nu, s))


def denjoy_h(sys: DenjoySystem) -> Callable[[np.ndarray], np.ndarray]:
    """The semiconjugacy ``h``: quantile of ``nu`` in cut coordinates."""

    def h(y):
        return quantile(sys.nu, np.clip(np.asarray(y, dtype=float), 0.0, 1.0))

    return h


def _make_branch(sys: DenjoySystem, sign: int):
    h = denjoy_h(sys)
    step = sign * sys.omega
    a_of = sys.weights

    def base(y):
        y = np.asarray(y, dtype=float)
        k = np.floor(y)
        s = y - k
        out = _lifted_cdf(sys.nu, h(s) + step)
        n, inside = sys.gap_index(s)
        target = n + sign
        movable = inside & (np.abs(target) <= sys.N)
        if np.any(movable):
            nm = n[movable]
            lo = sys.c[nm + sys.N]
            ratio = a_of(nm + sign) / a_of(nm)
            # lifted left endpoint of the target gap, read from the gap table so
            # that rounding in x_n + omega cannot pick the wrong side of the atom
            start = np.floor(sys.x(nm) + step) + sys.c[nm + sign + sys.N]
            out = out.copy()
            out[movable] = start + (s[movable] - lo) * ratio
        return out + k

    return base


def denjoy_map(sys: DenjoySystem) -> MonotoneMapOracle:
    """Denjoy homeomorphism as a circle oracle (forward and inverse lifts).

    The outermost gaps ``I_N`` (forward) and ``I_-N`` (inverse) have no
    truncated partner and collapse to a point; their length is ``a_N``.
    """
    return MonotoneMapOracle(_make_branch(sys, +1), _make_branch(sys, -1), circle=True)


def rotation_number(lift: Callable, iters: int, y0: float = 0.0) -> float:
    y = np.array([float(y0)])
    start = y[0]
    for _ in range(iters):
        y = np.asarray(lift(y), dtype=float)
    return float((y[0] - start) / iters)


def rotation_lift(omega: float):
    return lambda y: np.asarray(y, dtype=float) + omega


def minimal_set_sample(sys: DenjoySystem, K: int, method: str = "conjugacy") -> np.ndarray:
    """The points ``f^k(c_0)``, ``0 <= k < K``.

    ``conjugacy`` uses ``f^k(c_0) = c_k`` (``|k| <= N``) and ``nu[0, x_k]``
    beyond the truncation; ``iterate`` applies the map ``K - 1`` times.
    """
    if method == "iterate":
        f = denjoy_map(sys)
        start = sys.c[sys.n == 0][0] if sys.N >= 0 else 0.0
        out = np.empty(K)
        y = np.array([start])
        for k in range(K):
            out[k] = y[0]
            y = f(y)
        return out
    if method != "conjugacy":
        raise ValueError(method)
    k = np.arange(K)
    out = cdf(sys.nu, sys.x(k))
    low = k <= sys.N
    if sys.N >= 0:
        out[low] = np.interp(k[low], sys.n, sys.c)
    else:
        out = wrap(sys.x0 + k * sys.omega)
    return out


def in_open_gap(sys: DenjoySystem, y, margin: float = 0.0) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if sys.n.size == 0:
        return np.zeros(y.shape, dtype=bool)
    return np.any((y[..., None] > sys.c + margin) & (y[..., None] < sys.d - margin), axis=-1)


def covering_radius(points: np.ndarray, targets: np.ndarray) -> float:
    """Largest circle distance from a target to its nearest point."""
    p = np.sort(wrap(points))
    t = wrap(np.asarray(targets, dtype=float))
    i = np.searchsorted(p, t)
    left = p[(i - 1) % p.size]
    right = p[i % p.size]
    return float(np.max(np.minimum(circle_dist(t, left), circle_dist(t, right))))


def gap_images(sys: DenjoySystem, n0: int, steps: int):
    """Endpoints of ``f^k(I_n0)`` for ``k = 0..steps`` by endpoint iteration."""
    f = denjoy_map(sys)
    lo = np.interp(n0, sys.n, sys.c)
    hi = np.interp(n0, sys.n, sys.d)
    ends = np.empty((steps + 1, 2))
    y = np.array([lo, hi])
    for k in range(steps + 1):
        ends[k] = y
        y = f(y)
    return ends


def periodic_defect(lift: Callable, rho: float, qmax: int = 20, grid: int = 2001) -> float:
    """min over q <= qmax, grid y of ``|F^q(y) - y - p|`` with ``p = round(q rho)``."""
    y0 = np.linspace(0.0, 1.0, grid, endpoint=False)
    y = y0.copy()
    best = np.inf
    for q in range(1, qmax + 1):
        y = np.asarray(lift(y), dtype=float)
        p = np.round(q * rho)
        best = min(best, float(np.min(np.abs(y - y0 - p))))
    return best
