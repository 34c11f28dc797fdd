"""Two constructions built on the blow-up.

* Surgery on ``R x g``: an interval map ``g`` with a 3-cycle and a single
  attracting fixed point; the annulus around the fixed-point curve is
  replaced by a conjugate copy of a blown-up system with no invariant curve,
  leaving the 3-periodic curves untouched.
* A torus homeomorphism obtained by blowing up one orbit of an irrational
  torus rotation into vertical segments; points on the segments are the
  only non-distal points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bases import CircleRotation, check_rationally_independent
from .denjoy import GOLDEN, WeightSequence
from .measure import PreconditionError, circle_dist, wrap
from .skew import (
    BlownUpSystem,
    RotationFibres,
    default_qpf,
    global_attractor,
    one_sided_pinch,
)


class ConstructionError(RuntimeError):
    """A glued map fails its continuity check."""


# -- the interval map g --------------------------------------------------------

@dataclass(frozen=True)
class PLMap:
    """Continuous piecewise linear map of [0, 1] through the given nodes."""

    xs: tuple
    ys: tuple

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.xs, self.ys)

    def slope_at(self, x):
        i = np.searchsorted(self.xs, x, side="right") - 1
        i = min(max(i, 0), len(self.xs) - 2)
        return (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])

    def fixed_points(self):
        """Exact fixed points, one linear piece at a time."""
        out = []
        for i in range(len(self.xs) - 1):
            x0, x1 = self.xs[i], self.xs[i + 1]
            y0, y1 = self.ys[i], self.ys[i + 1]
            s = (y1 - y0) / (x1 - x0)
            if s == 1.0:
                continue
            x = (y0 - s * x0) / (1.0 - s)
            if x0 - 1e-15 <= x <= x1 + 1e-15 and not any(abs(x - o) < 1e-12 for o in out):
                out.append(x)
        return out

    def iterate(self, x, k):
        for _ in range(k):
            x = self(x)
        return x


def build_g() -> PLMap:
    """``g(0) = 1/2, g(1/2) = 1, g(1) = 0``; single fixed point 0.7 with slope 1/2."""
    return PLMap((0.0, 0.5, 0.6, 0.8, 1.0), (0.5, 1.0, 0.65, 0.75, 0.0))


def sign_changes(g: PLMap, grid: int = 10_000) -> int:
    x = np.linspace(0.0, 1.0, grid + 1)
    d = np.sign(g(x) - x)
    d = d[d != 0]
    return int(np.sum(d[1:] != d[:-1]))


# -- surgery ---------------------------------------------------------------------

@dataclass(frozen=True)
class SurgerySystem:
    """``F = R x g`` outside ``A0 = T x [a_minus, a_plus]`` and
    ``h1 o fhat o h1^-1`` inside, where ``fhat`` is the blown-up system on
    the annulus ``A = h^-1(T x [p, q])``."""

    inner: BlownUpSystem
    g: PLMap
    a_minus: float = 0.62
    a_plus: float = 0.78

    def __post_init__(self):
        g = self.g
        x0s = g.fixed_points()
        if len(x0s) != 1:
            raise ConstructionError(f"g has fixed points {x0s}")
        x0 = x0s[0]
        if not (self.a_minus < g(self.a_minus) < x0 < g(self.a_plus) < self.a_plus):
            raise ConstructionError("need a- < g(a-) < x0 < g(a+) < a+")
        sysm = self.inner.system
        if sysm.contraction_margin(np.linspace(0.0, 1.0, 1001, endpoint=False)) <= 0.0:
            raise PreconditionError("inner system does not map its annulus into the interior")

    @property
    def omega(self):
        return self.inner.base.omega

    @property
    def x0(self):
        return self.g.fixed_points()[0]

    def bands(self, theta):
        """Fibre boundaries ``L <= L' <= U' <= U`` of ``A`` and ``fhat(A)``."""
        b = self.inner
        sysm = b.system
        theta = np.asarray(theta, dtype=float)
        prev = b.base.step(theta, -1)
        shape = theta.shape
        L = b.mu_cdf(theta, np.full(shape, sysm.p))
        U = b.mu_cdf(theta, np.full(shape, sysm.q))
        Lp = b.mu_cdf(theta, sysm.fibre(prev, np.full(shape, sysm.p)))
        Up = b.mu_cdf(theta, sysm.fibre(prev, np.full(shape, sysm.q)))
        return L, Lp, Up, U

    def _targets(self):
        gm, gp = float(self.g(self.a_minus)), float(self.g(self.a_plus))
        return self.a_minus, gm, gp, self.a_plus

    def h1(self, theta, x):
        src = self.bands(theta)
        return _three_band(np.asarray(x, dtype=float), src, self._targets())

    def h1_inv(self, theta, z):
        src = self.bands(theta)
        return _three_band(np.asarray(z, dtype=float), self._targets(), src)

    def scale(self, theta):
        """Slope of ``h1`` on the middle band."""
        L, Lp, Up, U = self.bands(theta)
        _, gm, gp, _ = self._targets()
        return (gp - gm) / (Up - Lp)

    def outer(self, theta, x):
        return wrap(np.asarray(theta, dtype=float) + self.omega), self.g(x)

    def inside(self, x):
        x = np.asarray(x, dtype=float)
        return (x >= self.a_minus) & (x <= self.a_plus)

    def __call__(self, theta, x):
        theta = np.asarray(theta, dtype=float)
        x = np.asarray(x, dtype=float)
        th2, out = self.outer(theta, x)
        inn = self.inside(x)
        if np.any(inn):
            t, xi = theta[inn], x[inn]
            _, y = self.inner.fhat(t, self.h1_inv(t, xi))
            out = np.array(out, dtype=float)
            out[inn] = self.h1(th2[inn], y)
        return th2, out

    def boundary_residual(self, thetas) -> float:
        """Gap between the glued map and ``R x g`` on the boundary circles of ``A0``."""
        thetas = np.asarray(thetas, dtype=float)
        res = 0.0
        for a in (self.a_minus, self.a_plus):
            x = np.full(thetas.shape, a)
            th2, outer = self.outer(thetas, x)
            _, y = self.inner.fhat(thetas, self.h1_inv(thetas, x))
            res = max(res, float(np.max(np.abs(self.h1(th2, y) - outer))))
        return res

    def cycle_residual(self, thetas, power: int = 1) -> float:
        """Deviation of the constant curves 0, 1/2, 1 from a 3-cycle."""
        thetas = np.asarray(thetas, dtype=float)
        res = 0.0
        for c in (0.0, 0.5, 1.0):
            th, x = thetas, np.full(thetas.shape, c)
            for _ in range(power):
                th, x = self(th, x)
            want = self.g.iterate(c, power)
            res = max(res, float(np.max(np.abs(x - want))))
        return res


def _three_band(x, src, dst):
    s0, s1, s2, s3 = src
    d0, d1, d2, d3 = dst
    out = np.where(
        x <= s1, d0 + (x - s0) * (d1 - d0) / (s1 - s0),
        np.where(x <= s2, d1 + (x - s1) * (d2 - d1) / (s2 - s1),
                 d2 + (x - s2) * (d3 - d2) / (s3 - s2)))
    return out


def build_sharkovsky(inner: BlownUpSystem | None = None, N: int = 40,
                     weights: WeightSequence | None = None, boundary_points: int = 10_000,
                     tol: float = 1e-8) -> SurgerySystem:
    inner = inner or default_qpf("one-sided", N=N, weights=weights)
    s = SurgerySystem(inner, build_g())
    th = np.linspace(0.0, 1.0, boundary_points, endpoint=False)
    res = s.boundary_residual(th)
    if res > tol:
        raise ConstructionError(f"glued map discontinuous across the annulus boundary ({res:.2e})")
    return s


@dataclass(frozen=True)
class CurveCertificate:
    oscillation: float
    scale: float
    threshold: float
    depth: int
    radius: float

    @property
    def passed(self) -> bool:
        return self.oscillation >= self.threshold


def certify_no_invariant_curve(s: SurgerySystem, depth: int = 30, radius: float = 1e-7,
                               samples: int = 201) -> CurveCertificate:
    """Oscillation of the attractor's upper envelope inside ``A0`` over
    ``(theta* - radius, theta* + radius)``; an invariant curve would have to
    follow it, so a jump of order ``a0 * scale`` rules continuous ones out."""
    b = s.inner
    ts = b.pinch.theta_star
    thetas = wrap(ts + np.linspace(-radius, radius, samples))
    env = global_attractor(b, depth, thetas)
    upper = s.h1(thetas, env.upper[-1])
    osc = float(np.max(upper) - np.min(upper))
    scale = float(s.scale(np.array([ts]))[0])
    a0 = float(b.weights(0)) if b.N >= 0 else 0.0
    return CurveCertificate(osc, scale, 0.8 * a0 * scale, depth, radius)


# -- torus blow-up ----------------------------------------------------------------

def torus_dist(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return np.max(circle_dist(p, q), axis=-1)


@dataclass(frozen=True)
class ReesSystem:
    bsys: BlownUpSystem

    @property
    def omega(self):
        return self.bsys.base.omega

    @property
    def rho(self):
        return self.bsys.system.rho

    def h(self, z):
        z = np.asarray(z, dtype=float)
        return np.stack([z[..., 0], wrap(self.bsys.h(z[..., 0], z[..., 1]))], axis=-1)

    def rotation(self, z):
        z = np.asarray(z, dtype=float)
        return np.stack([wrap(z[..., 0] + self.omega), wrap(z[..., 1] + self.rho)], axis=-1)

    def fhat(self, z):
        z = np.asarray(z, dtype=float)
        th, x = self.bsys.fhat(z[..., 0], z[..., 1])
        return np.stack([th, wrap(x)], axis=-1)

    def fhat_inv(self, z):
        z = np.asarray(z, dtype=float)
        th, x = self.bsys.fhat_inv(z[..., 0], z[..., 1])
        return np.stack([th, wrap(x)], axis=-1)

    def segment(self, n: int):
        return self.bsys.segment(n)

    def semiconjugacy_residual(self, z) -> float:
        return float(np.max(torus_dist(self.h(self.fhat(z)), self.rotation(self.h(z)))))

    def bijection_residual(self, z) -> float:
        return float(np.max(torus_dist(self.fhat_inv(self.fhat(z)), z)))

    def glue_residual(self, thetas, eps: float = 1e-12) -> float:
        """Jumps of ``h`` and ``fhat`` across the cut ``x = 0``."""
        thetas = np.asarray(thetas, dtype=float)
        lo = np.stack([thetas, np.full(thetas.shape, eps)], axis=-1)
        hi = np.stack([thetas, np.full(thetas.shape, 1.0 - eps)], axis=-1)
        jump_h = torus_dist(self.h(lo), self.h(hi))
        jump_f = torus_dist(self.fhat(lo), self.fhat(hi))
        return float(max(np.max(jump_h), np.max(jump_f)))


def build_rees(omega: float = GOLDEN, rho: float = float(np.sqrt(2.0) - 1.0),
               z_star=(0.3, 0.5), weights: WeightSequence | None = None, N: int = 40,
               c: float = 0.35) -> ReesSystem:
    """Blow up the orbit of ``z*`` under the rotation by ``(omega, rho)``.

    The pinch bands are taken around the constant curve ``x = x*``.
    """
    check_rationally_independent(omega, rho)
    base = CircleRotation(omega)
    fibres = RotationFibres(base, rho, float(z_star[1]))
    pinch = one_sided_pinch(fibres, float(z_star[0]), c)
    bsys = BlownUpSystem(fibres, pinch, weights or WeightSequence(), N)
    bsys.validate()
    return ReesSystem(bsys)


@dataclass(frozen=True)
class DistalityRecord:
    two_sided: np.ndarray      # min over |n| <= K
    one_sided: np.ndarray      # min over 0 <= n <= K
    argmin: np.ndarray
    horizon: int


def distality_probe(s: ReesSystem, p, q, horizon: int) -> DistalityRecord:
    """Minimum torus distance between the orbits of ``p`` and ``q`` over ``|n| <= horizon``."""
    p = np.atleast_2d(np.asarray(p, dtype=float))
    q = np.atleast_2d(np.asarray(q, dtype=float))
    z = np.concatenate([p, q])
    P = p.shape[0]
    d0 = torus_dist(p, q)
    best_two = d0.copy()
    best_one = d0.copy()
    arg = np.zeros(P, dtype=np.int64)
    fw = z.copy()
    bw = z.copy()
    for n in range(1, horizon + 1):
        fw = s.fhat(fw)
        bw = s.fhat_inv(bw)
        df = torus_dist(fw[:P], fw[P:])
        db = torus_dist(bw[:P], bw[P:])
        best_one = np.minimum(best_one, df)
        upd = df < best_two
        arg = np.where(upd, n, arg)
        best_two = np.minimum(best_two, df)
        upd = db < best_two
        arg = np.where(upd, -n, arg)
        best_two = np.minimum(best_two, db)
    return DistalityRecord(best_two, best_one, arg, horizon)
