"""Almost periodic minimal base systems: circle rotation, torus translation, odometer.

Every base exposes the same small vocabulary so that fibre measures can be
assembled without knowing the point representation:

``step(theta, k)``   the k-th iterate (k may be negative),
``orbit(theta, N)``  iterates ``-N..N`` stacked on axis 1,
``dist(a, b)``       the invariant metric,
``same(a, b)``       exact-fibre test used to detect blown-up fibres.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .denjoy import GOLDEN, check_irrational
from .measure import circle_dist, wrap

SAME_TOL = 1e-13
_MASK64 = (1 << 64) - 1


class AperiodicityError(ValueError):
    """The blow-up point is periodic for the base map."""


@dataclass(frozen=True)
class CircleRotation:
    omega: float = GOLDEN
    minimal: bool = True
    almost_periodic: bool = True

    point_shape = ()
    dtype = float

    def step(self, theta, k=1):
        return wrap(np.asarray(theta, dtype=float) + k * self.omega)

    def orbit(self, theta, N):
        theta = np.asarray(theta, dtype=float)
        n = np.arange(-N, N + 1)
        return wrap(theta[..., None] + n * self.omega)

    def dist(self, a, b):
        return circle_dist(a, b)

    def same(self, a, b):
        return self.dist(a, b) < SAME_TOL

    def random(self, rng, size):
        return rng.random(size)

    def displacement(self, n):
        """``d(alpha^n theta, theta)``, the same for every theta."""
        return circle_dist(np.asarray(n, dtype=float) * self.omega, 0.0)

    def validate(self):
        check_irrational(self.omega)

    def coordinate(self, theta):
        """Scalar coordinate used for sorting and plotting."""
        return np.asarray(theta, dtype=float)


@dataclass(frozen=True)
class IteratedRotation(CircleRotation):
    """Circle rotation whose orbits are built by repeated single steps.

    Numerically a different route to the same points; used to cross-check
    the closed-form orbit arithmetic.
    """

    def orbit(self, theta, N):
        theta = np.asarray(theta, dtype=float)
        out = np.empty(theta.shape + (2 * N + 1,))
        out[..., N] = theta
        fwd = theta.copy()
        bwd = theta.copy()
        for k in range(1, N + 1):
            fwd = wrap(fwd + self.omega)
            bwd = wrap(bwd - self.omega)
            out[..., N + k] = fwd
            out[..., N - k] = bwd
        return out


@dataclass(frozen=True)
class TorusTranslation:
    omega1: float = GOLDEN
    omega2: float = float(np.sqrt(2.0) - 1.0)
    minimal: bool = True
    almost_periodic: bool = True

    point_shape = (2,)
    dtype = float

    @property
    def shift(self):
        return np.array([self.omega1, self.omega2])

    def step(self, theta, k=1):
        return wrap(np.asarray(theta, dtype=float) + k * self.shift)

    def orbit(self, theta, N):
        theta = np.asarray(theta, dtype=float)
        n = np.arange(-N, N + 1)[:, None]
        return wrap(theta[..., None, :] + n * self.shift)

    def dist(self, a, b):
        return np.max(circle_dist(a, b), axis=-1)

    def same(self, a, b):
        return self.dist(a, b) < SAME_TOL

    def random(self, rng, size):
        return rng.random((size, 2))

    def displacement(self, n):
        n = np.asarray(n, dtype=float)[..., None]
        return np.max(circle_dist(n * self.shift, 0.0), axis=-1)

    def validate(self, kmax: int = 1000, tol: float = 1e-10):
        check_rationally_independent(self.omega1, self.omega2, kmax, tol)

    def coordinate(self, theta):
        return np.asarray(theta, dtype=float)[..., 0]


def check_rationally_independent(a: float, b: float, kmax: int = 1000, tol: float = 1e-10) -> float:
    """Smallest ``|k1 a + k2 b - k3|`` over nonzero ``|k1|, |k2| <= kmax``."""
    k = np.arange(-kmax, kmax + 1, dtype=float)
    best = np.inf
    for k1 in range(0, kmax + 1):
        vals = circle_dist(k1 * a + k * b, 0.0)
        if k1 == 0:
            vals = vals[k != 0]
        best = min(best, float(vals.min()))
    if best <= tol:
        raise ValueError(f"({a}, {b}, 1) nearly rationally dependent (defect {best:.2e})")
    return best


def _trailing_zeros(v):
    v = np.asarray(v, dtype=np.uint64)
    out = np.full(v.shape, 64, dtype=np.int64)
    nz = v != 0
    low = v[nz] & (~v[nz] + np.uint64(1))          # lowest set bit
    out[nz] = np.round(np.log2(low.astype(np.float64))).astype(np.int64)
    return out


def van_der_corput(a):
    """Bit-reversal of a 64-bit odometer point, as a number in [0, 1)."""
    a = np.asarray(a, dtype=np.uint64)
    bits = (a[..., None] >> np.arange(64, dtype=np.uint64)) & np.uint64(1)
    return np.sum(bits * 0.5 ** np.arange(1, 65), axis=-1)


@dataclass(frozen=True)
class Odometer:
    """Binary adding machine on 64-digit 2-adic integers (low digit first).

    ``+1`` with carry is ordinary unsigned 64-bit addition; the metric is
    ``2^-k`` with ``k`` the first disagreeing digit.
    """

    minimal: bool = True
    almost_periodic: bool = True

    point_shape = ()
    dtype = np.uint64

    def step(self, theta, k=1):
        theta = np.asarray(theta, dtype=np.uint64)
        with np.errstate(over="ignore"):
            return theta + np.uint64(int(k) & _MASK64)

    def orbit(self, theta, N):
        theta = np.asarray(theta, dtype=np.uint64)
        n = np.arange(-N, N + 1, dtype=np.int64).view(np.uint64)
        with np.errstate(over="ignore"):
            return theta[..., None] + n

    def dist(self, a, b):
        x = np.asarray(a, dtype=np.uint64) ^ np.asarray(b, dtype=np.uint64)
        tz = _trailing_zeros(x)
        return np.where(tz >= 64, 0.0, 0.5 ** tz.astype(float))

    def same(self, a, b):
        return np.asarray(a, dtype=np.uint64) == np.asarray(b, dtype=np.uint64)

    def random(self, rng, size):
        return rng.integers(0, np.iinfo(np.uint64).max, size=size, dtype=np.uint64, endpoint=True)

    def displacement(self, n):
        n = np.asarray(n, dtype=np.int64)
        return self.dist(n.view(np.uint64), np.uint64(0))

    def validate(self):
        return None

    def coordinate(self, theta):
        return van_der_corput(theta)


def check_aperiodic(base, theta_star, horizon: int = 10**6) -> None:
    """Raise when ``alpha^n theta* == theta*`` for some ``1 <= n <= horizon``."""
    n = np.arange(1, horizon + 1)
    if isinstance(base, Odometer):
        # translation by n is never the identity on 64 digits for n < 2^64
        return
    d = base.displacement(n)
    if np.any(d < SAME_TOL):
        k = int(n[np.argmax(d < SAME_TOL)])
        raise AperiodicityError(f"theta* returns to itself after {k} steps")


def return_gaps(base, eps: float, horizon: int = 10**5) -> int:
    """Largest gap between consecutive ``n <= horizon`` with ``d(alpha^n, id) < eps``."""
    n = np.arange(0, horizon + 1)
    hits = n[base.displacement(n) < eps]
    if hits.size < 2:
        return horizon
    return int(np.diff(hits).max())
