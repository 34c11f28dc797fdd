"""Blow-up of one orbit on an invariant curve of a forced monotone fibre system.

Over a minimal base ``alpha`` sit fibre maps ``f_theta`` with an invariant
curve ``gamma``.  The fibre measures

    mu_theta = sum_n a_n mu^n_theta + b' Leb,
    mu^n_theta = mu^0_{alpha^-n theta} o f_theta^{-n},

with ``mu^0`` a Dirac mass at ``gamma(theta*)`` over ``theta*`` and uniform on
``[psi, phi]`` elsewhere, define the fibrewise quantile ``h_theta``.  The
extension ``fhat = h^-1 o f o h`` (affine on the blown-up segments) is
semiconjugate to ``f`` and its minimal set is pinched.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from . import _kernels as K
from .bases import CircleRotation, SAME_TOL, check_aperiodic
from .denjoy import EDGE_SLACK, WeightSequence, build_nu
from .measure import (
    QUANTILE_TOL,
    PreconditionError,
    bisect_quantile,
    cdf as measure_cdf,
    cdf_left as measure_cdf_left,
    circle_dist,
    quantile as measure_quantile,
    wrap,
)

CHUNK = 1024
CACHE_SIZE = 8
_CACHE_LOCK = threading.Lock()


class PinchError(ValueError):
    """Pinch functions violate ``psi <= gamma <= phi`` or leave the fibre interior."""


def _pl_forward(z, g0, g1, lam, p, q):
    fp = g1 + lam * (p - g0)
    fq = g1 + lam * (q - g0)
    return np.where(z <= p, z * fp / p,
                    np.where(z >= q, fq + (z - q) * (1.0 - fq) / (1.0 - q), g1 + lam * (z - g0)))


def _pl_inverse(z, g0, g1, lam, p, q):
    fp = g1 + lam * (p - g0)
    fq = g1 + lam * (q - g0)
    return np.where(z <= fp, z * p / fp,
                    np.where(z >= fq, q + (z - fq) * (1.0 - q) / (1.0 - fq), g0 + (z - g1) / lam))


def hat_curve(theta):
    """Default invariant curve ``0.5 + 0.05 (1 - 4 |theta|)``, values in [0.45, 0.55]."""
    return 0.5 + 0.05 * (1.0 - 4.0 * circle_dist(theta, 0.0))


@dataclass(frozen=True)
class ForcedIntervalSystem:
    """``(theta, x) -> (alpha theta, f_theta(x))`` with a piecewise linear
    homeomorphism ``f_theta`` of [0, 1]: slope ``lam`` towards the curve on the
    core ``[p, q]``, linear on ``[0, p]`` and ``[q, 1]``.

    ``f_theta(gamma(theta)) = gamma(alpha theta)`` holds by construction.
    """

    base: object = field(default_factory=CircleRotation)
    curve: Callable = hat_curve
    lam: float = 0.5
    p: float = 0.25
    q: float = 0.75

    kind = K.INTERVAL
    rho = 0.0

    def __post_init__(self):
        if not (0.0 < self.lam < 1.0 and 0.0 < self.p < self.q < 1.0):
            raise ValueError("need 0 < lam < 1 and 0 < p < q < 1")

    def gamma(self, theta):
        return np.asarray(self.curve(theta), dtype=float)

    def fibre(self, theta, x):
        g0 = self.gamma(theta)
        g1 = self.gamma(self.base.step(theta))
        return _pl_forward(np.asarray(x, dtype=float), g0, g1, self.lam, self.p, self.q)

    def fibre_inv(self, theta, y):
        """Inverse of the fibre map ``f_theta`` (``y`` lives over ``alpha theta``)."""
        g0 = self.gamma(theta)
        g1 = self.gamma(self.base.step(theta))
        return _pl_inverse(np.asarray(y, dtype=float), g0, g1, self.lam, self.p, self.q)

    def forward(self, theta, x):
        return self.base.step(theta), self.fibre(theta, x)

    def inverse(self, theta, y):
        prev = self.base.step(theta, -1)
        return prev, self.fibre_inv(prev, y)

    def iterate_fibre(self, theta, x, k):
        """``f^k_theta(x)``, lands over ``alpha^k theta``."""
        y = np.asarray(x, dtype=float)
        th = theta
        for _ in range(k):
            y = self.fibre(th, y)
            th = self.base.step(th)
        return y

    def atom_position(self, theta, n):
        return self.gamma(theta)

    def invariance_residual(self, theta) -> float:
        return float(np.max(np.abs(self.fibre(theta, self.gamma(theta))
                                   - self.gamma(self.base.step(theta)))))

    def contraction_margin(self, theta) -> float:
        """min over the grid of ``f(p) - p`` and ``q - f(q)``; positive iff the
        annulus ``[p, q]`` is mapped into its interior."""
        fp = self.fibre(theta, np.full(np.shape(self.base.coordinate(theta)), self.p))
        fq = self.fibre(theta, np.full(np.shape(self.base.coordinate(theta)), self.q))
        return float(min(np.min(fp - self.p), np.min(self.q - fq)))


@dataclass(frozen=True)
class RotationFibres:
    """Torus rotation ``(theta, x) -> (theta + omega, x + rho)`` seen as a skew
    product with circle fibres in cut coordinates [0, 1)."""

    base: object = field(default_factory=CircleRotation)
    rho: float = float(np.sqrt(2.0) - 1.0)
    x_star: float = 0.5

    kind = K.CIRCLE
    lam = 1.0
    p = 0.0
    q = 1.0

    def gamma(self, theta):
        return np.full(np.shape(self.base.coordinate(theta)), self.x_star)

    def fibre(self, theta, x):
        return wrap(np.asarray(x, dtype=float) + self.rho)

    def fibre_inv(self, theta, y):
        return wrap(np.asarray(y, dtype=float) - self.rho)

    def forward(self, theta, x):
        return self.base.step(theta), self.fibre(theta, x)

    def inverse(self, theta, y):
        return self.base.step(theta, -1), self.fibre_inv(theta, y)

    def atom_position(self, theta, n):
        return wrap(self.x_star + np.asarray(n) * self.rho)


@dataclass(frozen=True)
class PinchFunctions:
    """Curves ``psi <= gamma <= phi`` that meet only over ``theta*``.

    ``mode`` is ``"one-sided"`` (phi = gamma on a left, psi = gamma on a right
    neighbourhood of theta*), ``"oscillating"`` (both touch gamma on sequences
    accumulating from both sides) or ``"distance"`` (general bases).
    """

    theta_star: object
    phi: Callable
    psi: Callable
    mode: str = "one-sided"

    def check(self, system, thetas, margin: float = 1e-12) -> None:
        g = system.gamma(thetas)
        up = np.asarray(self.phi(thetas))
        lo = np.asarray(self.psi(thetas))
        if np.any(lo > g + margin) or np.any(up < g - margin):
            raise PinchError("psi <= gamma <= phi violated")
        if np.any(lo <= 0.0) or np.any(up >= 1.0):
            raise PinchError("pinch curves leave the open unit interval; use a smaller scale c")
        off = ~np.asarray(system.base.same(thetas, self.theta_star))
        if np.any(up[off] - lo[off] <= 0.0):
            raise PinchError("phi == psi away from theta*")


def _signed_offset(theta, theta_star):
    s = wrap(np.asarray(theta, dtype=float) - theta_star)
    return np.where(s >= 0.5, s - 1.0, s)


def one_sided_pinch(system, theta_star: float = 0.3, c: float = 0.35, delta: float = 0.1) -> PinchFunctions:
    """Hats vanishing on ``(theta* - delta, theta*]`` (upper) and ``[theta*, theta* + delta)`` (lower)."""

    def w_up(theta):
        s = wrap(np.asarray(theta, dtype=float) - theta_star)
        return np.clip(np.minimum(s, 1.0 - delta - s) / delta, 0.0, 1.0)

    def w_down(theta):
        s = wrap(np.asarray(theta, dtype=float) - theta_star)
        return np.clip(np.minimum(1.0 - s, s - delta) / delta, 0.0, 1.0)

    return PinchFunctions(theta_star,
                          lambda th: system.gamma(th) + c * w_up(th),
                          lambda th: system.gamma(th) - c * w_down(th),
                          "one-sided")


def oscillating_pinch(system, theta_star: float = 0.3, c: float = 0.35) -> PinchFunctions:
    """``phi - gamma`` and ``gamma - psi`` proportional to ``|s|(1 +- sin(2 pi log2|s|))``."""

    def parts(theta):
        s = np.abs(_signed_offset(theta, theta_star))
        with np.errstate(divide="ignore"):
            L = np.log2(np.where(s > 0.0, s, 1.0))
        osc = np.sin(2.0 * np.pi * L)
        return s * (1.0 + osc), s * (1.0 - osc)

    return PinchFunctions(theta_star,
                          lambda th: system.gamma(th) + c * parts(th)[0],
                          lambda th: system.gamma(th) - c * parts(th)[1],
                          "oscillating")


@dataclass
class FibreBatch:
    """Kernel parameters for a block of unique fibres."""

    G: np.ndarray
    PHI: np.ndarray
    PSI: np.ndarray
    dj: np.ndarray
    atom: np.ndarray


@dataclass(frozen=True)
class BlownUpSystem:
    system: object
    pinch: PinchFunctions
    weights: WeightSequence = field(default_factory=WeightSequence)
    N: int = 40
    tol: float = QUANTILE_TOL

    @property
    def base(self):
        return self.system.base

    @property
    def kind(self):
        return self.system.kind

    @property
    def tail(self) -> float:
        return self.weights.tail(self.N)

    @property
    def b_eff(self) -> float:
        return self.weights.b + self.tail

    def validate(self, grid: int = 1000) -> None:
        """Base and curve preconditions: aperiodic blow-up point, pinch ordering,
        curve invariance; for circle fibres no atom on the cut."""
        self.base.validate()
        check_aperiodic(self.base, self.pinch.theta_star)
        rng = np.random.default_rng(0)
        th = self.base.random(rng, grid)
        self.pinch.check(self.system, th)
        if self.kind == K.INTERVAL:
            res = self.system.invariance_residual(th)
            if res > 1e-10:
                raise PreconditionError(f"curve not invariant (residual {res:.2e})")
        elif self.N >= 0:
            pos = self.system.atom_position(None, np.arange(-self.N, self.N + 1))
            if np.min(circle_dist(pos, 0.0)) < 1e-9:
                raise PreconditionError("an atom of the fibre measures sits on the cut x = 0")

    # -- kernel plumbing -------------------------------------------------

    def _weights_row(self, k=None):
        N = self.N
        if N < 0:
            return np.zeros(1), 1.0
        n = N - np.arange(2 * N + 1)
        W = self.weights(n).astype(float)
        if k is None:
            return W, self.b_eff
        if k > N:
            raise ValueError("truncation order beyond N")
        W = np.where(np.abs(n) <= k, W, 0.0)
        return W, 1.0 - self.weights.partial(k)

    def _points(self, theta):
        ps = self.base.point_shape
        theta = np.asarray(theta, dtype=self.base.dtype)
        bshape = theta.shape[:theta.ndim - len(ps)]
        return theta, bshape, ps

    def _batch(self, uniq) -> FibreBatch:
        N = max(self.N, 0)
        O = self.base.orbit(uniq, N)
        G = np.ascontiguousarray(self.system.gamma(O), dtype=float)
        PHI = np.ascontiguousarray(self.pinch.phi(O), dtype=float)
        PSI = np.ascontiguousarray(self.pinch.psi(O), dtype=float)
        hit = np.asarray(self.base.same(O, self.pinch.theta_star))
        if self.N < 0:
            hit[:] = False
        dj = np.where(hit.any(axis=1), hit.argmax(axis=1), -1).astype(np.int64)
        n = N - np.where(dj >= 0, dj, N)
        atom = np.where(dj >= 0, self.system.atom_position(uniq, n), 0.0).astype(float)
        return FibreBatch(G, PHI, PSI, dj, np.ascontiguousarray(atom))

    def _batches(self, th):
        """Unique fibres of ``th`` and their parameter blocks, memoised on the
        raw bytes of the query so repeated evaluations over the same fibres
        (``h`` followed by ``mu_cdf``) share the orbit work."""
        key = (th.dtype.str, th.shape, th.tobytes())
        cache = self._cache
        with _CACHE_LOCK:
            hit = cache.get(key)
            if hit is not None:
                cache.move_to_end(key)
                return hit
        uniq, inv = np.unique(th, axis=0, return_inverse=True)
        inv = inv.reshape(-1).astype(np.int64)
        blocks = []
        for start in range(0, uniq.shape[0], CHUNK):
            blocks.append((start, self._batch(uniq[start:start + CHUNK])))
        entry = (inv, blocks)
        with _CACHE_LOCK:
            cache[key] = entry
            while len(cache) > CACHE_SIZE:
                cache.popitem(last=False)
        return entry

    @cached_property
    def _cache(self):
        return OrderedDict()

    def _run(self, theta, values, op, k=None, left=False):
        theta, bshape, ps = self._points(theta)
        values = np.asarray(values, dtype=float)
        shape = np.broadcast_shapes(bshape, values.shape)
        th = np.ascontiguousarray(np.broadcast_to(theta, shape + ps).reshape((-1,) + ps))
        v = np.ascontiguousarray(np.broadcast_to(values, shape).reshape(-1))
        out = np.empty(v.shape[0])
        W, bprime = self._weights_row(k)
        sysm = self.system
        inv, blocks = self._batches(th)
        for start, fb in blocks:
            sel = np.nonzero((inv >= start) & (inv < start + fb.dj.shape[0]))[0]
            if sel.size == 0:
                continue
            fi = np.ascontiguousarray(inv[sel] - start)
            vv = np.ascontiguousarray(v[sel])
            args = (fb.G, fb.PHI, fb.PSI, W, bprime, fb.dj, fb.atom, self.N,
                    sysm.kind, sysm.lam, sysm.p, sysm.q, sysm.rho)
            if op == "cdf":
                out[sel] = K.cdf_batch(vv, fi, left, *args)
            else:
                out[sel] = K.quantile_batch(vv, fi, *args, self.tol)
        return out.reshape(shape)

    # -- fibre measures ----------------------------------------------------

    def mu_cdf(self, theta, y, left: bool = False, k: int | None = None):
        """``mu_theta[0, y]`` (``left=True``: ``mu_theta[0, y)``); ``k`` truncates to ``|n| <= k``."""
        return self._run(theta, y, "cdf", k, left)

    def h(self, theta, x, k: int | None = None):
        """Fibre quantile ``h_theta(x) = min{y : mu_theta[0, y] >= x}``."""
        return self._run(theta, x, "quantile", k)

    def h_truncated(self, k: int, theta, x):
        return self.h(theta, x, k=k)

    def blown_index(self, theta):
        """``n`` with ``theta == alpha^n theta*`` (``|n| <= N``), else ``N + 1``."""
        theta, bshape, ps = self._points(theta)
        flat = theta.reshape((-1,) + ps)
        if self.N < 0:
            return np.full(bshape, 1, dtype=np.int64)
        O = self.base.orbit(flat, self.N)
        hit = np.asarray(self.base.same(O, self.pinch.theta_star))
        dj = np.where(hit.any(axis=1), hit.argmax(axis=1), -1)
        n = np.where(dj >= 0, self.N - dj, self.N + 1)
        return n.reshape(bshape)

    def theta_n(self, n):
        return self.base.step(self.pinch.theta_star, n)

    def segment(self, n: int):
        """``(theta*_n, lo, hi)``: the vertical segment collapsed by ``h`` onto the curve."""
        if self.N < 0 or abs(n) > self.N:
            raise ValueError(f"no segment with index {n}")
        th = self.theta_n(n)
        a = self.system.atom_position(th, n)
        lo = float(self.mu_cdf(th, a, left=True))
        hi = float(self.mu_cdf(th, a))
        return th, lo, hi

    def gamma_minus(self, theta):
        return self.mu_cdf(theta, self.system.gamma(theta), left=True)

    def gamma_plus(self, theta):
        return self.mu_cdf(theta, self.system.gamma(theta))

    # -- reference (pure numpy) route --------------------------------------

    def mu0_cdf(self, theta, y):
        theta = np.asarray(theta, dtype=self.base.dtype)
        y = np.asarray(y, dtype=float)
        at_star = np.asarray(self.base.same(theta, self.pinch.theta_star))
        lo = np.asarray(self.pinch.psi(theta), dtype=float)
        hi = np.asarray(self.pinch.phi(theta), dtype=float)
        width = hi - lo
        if np.any((width <= 0.0) & ~at_star):
            raise PinchError("phi == psi away from theta*")
        g = self.system.gamma(theta)
        safe = np.where(width > 0.0, width, 1.0)
        uni = np.clip((y - lo) / safe, 0.0, 1.0)
        return np.where(at_star, (y >= g).astype(float), uni)

    def mun_cdf(self, n: int, theta, y):
        """``mu^0_{alpha^-n theta}(f_theta^{-n}[0, y])`` by step-by-step composition."""
        theta = np.asarray(theta, dtype=self.base.dtype)
        y = np.asarray(y, dtype=float)
        src = self.base.step(theta, -n)
        if self.kind == K.CIRCLE:
            def lift(z):
                k = np.floor(z)
                return k + self.mu0_cdf(src, z - k)
            shift = n * self.system.rho
            return lift(y - shift) - lift(-shift)
        z = y
        if n > 0:
            for i in range(1, n + 1):
                z = self.system.fibre_inv(self.base.step(theta, -i), z)
        else:
            for i in range(-n):
                z = self.system.fibre(self.base.step(theta, i), z)
        at_star = np.asarray(self.base.same(src, self.pinch.theta_star))
        # the Dirac term is compared in the target fibre, where it sits at gamma(theta)
        dirac = (y >= self.system.gamma(theta)).astype(float)
        return np.where(at_star, dirac, self.mu0_cdf(src, z))

    def mu_cdf_reference(self, theta, y):
        y = np.asarray(y, dtype=float)
        if self.N < 0:
            return y + 0.0 * np.asarray(self.base.coordinate(theta))
        total = self.b_eff * y
        for n in range(-self.N, self.N + 1):
            total = total + float(self.weights(n)) * self.mun_cdf(n, theta, y)
        return total

    # -- the extension -------------------------------------------------------

    def _segment_map(self, theta, x, sign):
        """Affine segment-to-segment part of ``fhat`` (sign=+1) / ``fhat^-1`` (sign=-1).

        Returns the mask of points handled and their images.
        """
        n = np.asarray(self.blown_index(theta))
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        handled = np.zeros(x.shape, dtype=bool)
        if self.N < 0:
            return handled, out
        for m in np.unique(n[np.abs(n) <= self.N]):
            target = m + sign
            if abs(target) > self.N:
                continue
            _, lo, hi = self.segment(int(m))
            _, lo2, hi2 = self.segment(int(target))
            sel = (n == m) & (x >= lo - EDGE_SLACK) & (x <= hi + EDGE_SLACK)
            # far segments can be thinner than double resolution
            ratio = (hi2 - lo2) / (hi - lo) if hi > lo else 0.0
            out[sel] = lo2 + (x[sel] - lo) * ratio
            handled |= sel
        return handled, out

    def fhat(self, theta, x):
        theta, _, _ = self._points(theta)
        y = self.h(theta, x)
        th2, y2 = self.system.forward(theta, y)
        x2 = self.mu_cdf(th2, y2)
        handled, seg = self._segment_map(theta, x, +1)
        return th2, np.where(handled, seg, x2)

    def fhat_inv(self, theta, x):
        theta, _, _ = self._points(theta)
        y = self.h(theta, x)
        th0, y0 = self.system.inverse(theta, y)
        x0 = self.mu_cdf(th0, y0)
        handled, seg = self._segment_map(theta, x, -1)
        return th0, np.where(handled, seg, x0)

    def fibre_distance(self, a, b):
        if self.kind == K.CIRCLE:
            return circle_dist(a, b)
        return np.abs(np.asarray(a) - np.asarray(b))

    def semiconjugacy_residual(self, theta, x) -> float:
        """sup of ``|h(fhat(theta, x)) - f(h(theta, x))|`` in the fibre metric."""
        th2, x2 = self.fhat(theta, x)
        _, fy = self.system.forward(theta, self.h(theta, x))
        return float(np.max(self.fibre_distance(self.h(th2, x2), fy)))

    def preimage_width(self, theta, target=None, slack: float = 1e-11):
        """Width of ``{x : h_theta(x) = target}``, located by bisection on ``h``
        itself (``slack`` absorbs the quantile tolerance)."""
        theta, bshape, _ = self._points(theta)
        if target is None:
            target = self.system.gamma(theta)
        target = np.broadcast_to(np.asarray(target, dtype=float), bshape)
        start = np.full(bshape, 0.5)
        below = bisect_quantile(
            lambda x: (self.h(theta, x) >= target - slack).astype(float), start, 1e-13)
        above = bisect_quantile(
            lambda x: (self.h(theta, x) > target + slack).astype(float), start, 1e-13)
        return above - below

    # -- minimal set ---------------------------------------------------------

    def minimal_set_sample(self, K: int, method: str = "conjugacy"):
        """Orbit of the lower end of ``S_0`` (or of ``(theta*, gamma)`` without blow-up),
        ``K`` points with indices ``-K//2 <= k < K - K//2``."""
        ks = np.arange(-(K // 2), K - K // 2)
        ts = self.theta_n(ks)
        if method == "conjugacy":
            xs = self.mu_cdf(ts, self.system.gamma(ts), left=True)
            return ts, xs
        if method != "iterate":
            raise ValueError(method)
        th0 = self.pinch.theta_star
        x0 = float(self.mu_cdf(th0, self.system.gamma(th0), left=True))
        fw = ks[ks >= 0]
        bw = ks[ks < 0]
        out_t = [None] * K
        out_x = np.empty(K)
        th, x = np.asarray(th0, dtype=self.base.dtype), np.array(x0)
        for i in range(fw.size):
            out_t[K // 2 + i], out_x[K // 2 + i] = th, float(x)
            th, x = self.fhat(th, x)
        th, x = np.asarray(th0, dtype=self.base.dtype), np.array(x0)
        for i in range(bw.size):
            th, x = self.fhat_inv(th, x)
            out_t[K // 2 - 1 - i], out_x[K // 2 - 1 - i] = th, float(x)
        return np.stack([np.asarray(t) for t in out_t]), out_x

    def discontinuity_jump(self, approach_count: int = 30):
        return discontinuity_jump(self, approach_count)


# -- jump across theta* --------------------------------------------------------

@dataclass(frozen=True)
class JumpEstimate:
    jump: float
    differences: np.ndarray
    converged: bool


def discontinuity_jump(bsys: BlownUpSystem, approach_count: int = 30) -> JumpEstimate:
    """``lim_{theta -> theta*-} mu_theta[0, gamma) - lim_{theta -> theta*+} mu_theta[0, gamma]``.

    Evaluated at ``theta* -+ 2^-j`` and Richardson-extrapolated assuming the
    one-sided limits are approached linearly.
    """
    if bsys.pinch.mode != "one-sided":
        raise PreconditionError("the jump is defined for one-sided pinching")
    if not 2 <= approach_count or 2.0 ** -approach_count < 100 * SAME_TOL:
        raise ValueError("approach_count must keep theta* +- 2^-j off the exact-fibre tolerance")
    ts = bsys.pinch.theta_star
    eps = 2.0 ** -np.arange(1, approach_count + 1)
    left_t = wrap(ts - eps)
    right_t = wrap(ts + eps)
    L = bsys.mu_cdf(left_t, bsys.system.gamma(left_t), left=True)
    R = bsys.mu_cdf(right_t, bsys.system.gamma(right_t))
    D = L - R
    est = 2.0 * D[-1] - D[-2]
    prev = 2.0 * D[-2] - D[-3] if D.size >= 3 else est
    return JumpEstimate(float(est), D, bool(abs(est - prev) < 1e-8))


# -- filled-in envelopes ----------------------------------------------------------

@dataclass(frozen=True)
class EnvelopeVerdict:
    bin_centres: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    verdict: str
    margin: float          # vertical distance from the midpoint of S_0 to nearby samples
    coverage: float        # largest distance from a point of S_0 to the samples


def filled_in_envelope(bsys: BlownUpSystem, thetas, xs, bins: int = 1000,
                       window: float = 1e-3, eps: float = 1e-2, probes: int = 101) -> EnvelopeVerdict:
    """Per-bin ``inf``/``sup`` envelopes of a minimal-set sample and a verdict on
    whether the sample fills the segment over ``theta*``."""
    coord = np.asarray(bsys.base.coordinate(thetas), dtype=float)
    xs = np.asarray(xs, dtype=float)
    idx = np.minimum((coord * bins).astype(int), bins - 1)
    lower = np.full(bins, np.nan)
    upper = np.full(bins, np.nan)
    np.fmin.at(lower, idx, xs)
    np.fmax.at(upper, idx, xs)
    centres = (np.arange(bins) + 0.5) / bins
    if bsys.N < 0:
        return EnvelopeVerdict(centres, lower, upper, "trivial: no blow-up", np.nan, np.nan)
    _, lo, hi = bsys.segment(0)
    mid = 0.5 * (lo + hi)
    d_base = np.asarray(bsys.base.dist(thetas, bsys.pinch.theta_star), dtype=float)
    near = d_base < window
    if not np.any(near):
        return EnvelopeVerdict(centres, lower, upper, "inconclusive", np.nan, np.nan)
    margin = float(np.min(np.abs(xs[near] - mid)))
    pts = np.linspace(lo, hi, probes)
    close = d_base < eps
    if np.any(close):
        gap = np.maximum(d_base[close][None, :], np.abs(pts[:, None] - xs[close][None, :]))
        coverage = float(np.max(np.min(gap, axis=1)))
    else:
        coverage = np.inf
    a0 = float(bsys.weights(0))
    if margin >= a0 / 4.0:
        verdict = "non-filled-in evidence"
    elif coverage <= eps:
        verdict = "filled-in evidence"
    else:
        verdict = "inconclusive"
    return EnvelopeVerdict(centres, lower, upper, verdict, margin, coverage)


# -- pinched set parametrisation -----------------------------------------------

@dataclass(frozen=True)
class PinchedSetChart:
    """Circle parametrisation ``xi`` of ``h^-1(curve)`` for circle-rotation bases.

    ``eta`` is the distribution function of the Denjoy measure with atoms
    ``a_n`` on the orbit of ``theta*``; a plateau of ``eta_hat`` is traversed
    downwards along the segment over the corresponding fibre.
    """

    bsys: BlownUpSystem

    @cached_property
    def nu(self):
        b = self.bsys
        return build_nu(b.base.omega, b.pinch.theta_star, b.weights, b.N, validate=False)

    def eta(self, theta):
        return measure_cdf_left(self.nu, np.asarray(theta, dtype=float))

    def eta_hat(self, t):
        return measure_quantile(self.nu, np.clip(np.asarray(t, dtype=float), 0.0, 1.0))

    def gamma_plus(self, theta):
        return self.bsys.gamma_plus(theta)

    def xi(self, t):
        t = np.asarray(t, dtype=float)
        th = wrap(self.eta_hat(t))
        return th, self.gamma_plus(th) - (t - self.eta(th))

    def xi_inv(self, theta, x):
        theta = np.asarray(theta, dtype=float)
        return self.eta(theta) + self.gamma_plus(theta) - np.asarray(x, dtype=float)

    def circle_lift(self, t):
        """Lift of ``xi^-1 o fhat o xi`` to the real line."""
        t = np.asarray(t, dtype=float)
        k = np.floor(t)
        th, x = self.xi(t - k)
        th2, x2 = self.bsys.fhat(th, x)
        unwrapped = th + self.bsys.base.omega
        return k + np.floor(unwrapped) + self.xi_inv(th2, x2)

    def eta_jump(self, n: int = 0) -> float:
        th = wrap(self.bsys.pinch.theta_star + n * self.bsys.base.omega)
        return float(measure_cdf(self.nu, th) - measure_cdf_left(self.nu, th))


# -- global attractor ----------------------------------------------------------------

@dataclass(frozen=True)
class AttractorEnvelopes:
    thetas: list          # fibres of level k (level `depth` is the requested grid)
    lower: list
    upper: list

    def width(self, k: int = -1):
        return np.asarray(self.upper[k]) - np.asarray(self.lower[k])


def global_attractor(bsys: BlownUpSystem, depth: int, thetas) -> AttractorEnvelopes:
    """Images of the boundary curves of ``h^-1(T x [p, q])`` under ``fhat^k``.

    Seeds sit at ``alpha^-depth`` of the requested fibres so that level
    ``depth`` lands exactly on them.
    """
    sysm = bsys.system
    if sysm.kind != K.INTERVAL:
        raise PreconditionError("global attractor needs interval fibres")
    rng = np.random.default_rng(1)
    probe = bsys.base.random(rng, 1000)
    if sysm.contraction_margin(probe) <= 0.0:
        raise PreconditionError("fibre maps do not send the annulus into its interior")
    th = bsys.base.step(thetas, -depth)
    lo = bsys.mu_cdf(th, np.full(np.shape(bsys.base.coordinate(th)), sysm.p))
    hi = bsys.mu_cdf(th, np.full(np.shape(bsys.base.coordinate(th)), sysm.q))
    T, Lo, Hi = [th], [lo], [hi]
    for _ in range(depth):
        th2, lo = bsys.fhat(th, lo)
        _, hi = bsys.fhat(th, hi)
        th = th2
        T.append(th)
        Lo.append(lo)
        Hi.append(hi)
    return AttractorEnvelopes(T, Lo, Hi)


def attractor_closed_form(bsys: BlownUpSystem, depth: int, thetas):
    """``mu_theta[0, f^depth(p)]`` and ``mu_theta[0, f^depth(q)]`` over ``thetas``."""
    sysm = bsys.system
    th = bsys.base.step(thetas, -depth)
    shape = np.shape(bsys.base.coordinate(th))
    yp = sysm.iterate_fibre(th, np.full(shape, sysm.p), depth)
    yq = sysm.iterate_fibre(th, np.full(shape, sysm.q), depth)
    return bsys.mu_cdf(thetas, yp), bsys.mu_cdf(thetas, yq)


# -- default constructions ------------------------------------------------------------

def default_qpf(mode: str = "one-sided", N: int = 40, weights: WeightSequence | None = None,
                omega: float | None = None, theta_star: float = 0.3, c: float = 0.35,
                lam: float = 0.5) -> BlownUpSystem:
    base = CircleRotation() if omega is None else CircleRotation(omega)
    system = ForcedIntervalSystem(base=base, lam=lam)
    if mode == "one-sided":
        pinch = one_sided_pinch(system, theta_star, c)
    elif mode == "oscillating":
        pinch = oscillating_pinch(system, theta_star, c)
    else:
        raise ValueError(f"unknown pinch mode {mode!r}")
    return BlownUpSystem(system, pinch, weights or WeightSequence(), N)
