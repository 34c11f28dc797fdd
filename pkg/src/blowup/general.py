"""Blow-ups over general almost periodic bases with distance-based pinch curves.

``phi = gamma + c dist(., S)`` and ``psi = gamma - c dist(., T)`` for two
disjoint sequences ``S, T`` converging to ``theta*``: ``phi`` touches the
curve exactly on the closure of ``S``, ``psi`` on the closure of ``T``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bases import (
    CircleRotation,
    IteratedRotation,
    Odometer,
    TorusTranslation,
    check_aperiodic,
    van_der_corput,
)
from .denjoy import WeightSequence
from .measure import circle_dist
from .skew import (
    BlownUpSystem,
    ForcedIntervalSystem,
    PinchError,
    PinchFunctions,
    hat_curve,
)

DEFAULT_THETA_STAR = {
    "rotation": 0.3,
    "torus2": (0.3, 0.7),
    "odometer": 0x9E3779B97F4A7C15,
}


def torus_curve(theta):
    theta = np.asarray(theta, dtype=float)
    hats = 1.0 - 4.0 * circle_dist(theta, 0.0)
    return 0.5 + 0.025 * (hats[..., 0] + hats[..., 1])


def odometer_curve(theta):
    return 0.45 + 0.1 * van_der_corput(theta)


def first_coordinate_curve(theta):
    """Torus curve depending on the first angle only (embeds the circle case)."""
    return hat_curve(np.asarray(theta, dtype=float)[..., 0])


def make_base(name: str, **kw):
    if name == "rotation":
        return CircleRotation(**kw)
    if name == "torus2":
        return TorusTranslation(**kw)
    if name == "odometer":
        return Odometer(**kw)
    raise ValueError(f"unknown base {name!r}")


def default_curve(base):
    if isinstance(base, TorusTranslation):
        return torus_curve
    if isinstance(base, Odometer):
        return odometer_curve
    return hat_curve


@dataclass(frozen=True)
class PinchSequences:
    theta_star: object
    S: np.ndarray
    T: np.ndarray
    c: float = 0.35

    def check(self, base) -> None:
        ps = base.point_shape
        S, T = np.asarray(self.S), np.asarray(self.T)
        cross = base.dist(S[:, None] if not ps else S[:, None, :], T[None] if not ps else T[None, :, :])
        if np.any(cross == 0.0):
            raise ValueError("S and T intersect")
        dS = np.asarray(base.dist(S, self.theta_star))
        dT = np.asarray(base.dist(T, self.theta_star))
        for d in (dS, dT):
            if np.any(d == 0.0) or np.any(np.diff(d) >= 0.0):
                raise ValueError("sequences must approach theta* strictly monotonically")


def default_sequences(base, theta_star=None, K: int | None = None, c: float = 0.35) -> PinchSequences:
    """``sigma_n`` and ``tau_n`` approaching ``theta*`` from the two sides (circle,
    first torus angle) or through alternating digits (odometer).

    The default prefix length keeps ``c dist(sigma_K, T)`` above double
    resolution at 0.5 (30 terms of ``3^-n``, 20 digit pairs).
    """
    if theta_star is None:
        theta_star = _default_star(base)
    if K is None:
        K = 20 if isinstance(base, Odometer) else 30
    n = np.arange(1, K + 1)
    if isinstance(base, Odometer):
        ts = np.uint64(theta_star)
        S = ts ^ (np.uint64(1) << (2 * n).astype(np.uint64))
        T = ts ^ (np.uint64(1) << (2 * n + 1).astype(np.uint64))
        return PinchSequences(ts, S, T, c)
    step = 3.0 ** -n
    if isinstance(base, TorusTranslation):
        ts = np.asarray(theta_star, dtype=float)
        e = np.array([1.0, 0.0])
        S = np.mod(ts + step[:, None] * e, 1.0)
        T = np.mod(ts - step[:, None] * e, 1.0)
        return PinchSequences(ts, S, T, c)
    ts = float(theta_star)
    return PinchSequences(ts, np.mod(ts + step, 1.0), np.mod(ts - step, 1.0), c)


def _default_star(base):
    if isinstance(base, Odometer):
        return np.uint64(DEFAULT_THETA_STAR["odometer"])
    if isinstance(base, TorusTranslation):
        return np.array(DEFAULT_THETA_STAR["torus2"])
    return DEFAULT_THETA_STAR["rotation"]


def set_distance(base, theta, points):
    """``min_i d(theta, points_i)`` by brute force over the stored points."""
    ps = base.point_shape
    theta = np.asarray(theta, dtype=base.dtype)
    points = np.asarray(points, dtype=base.dtype)
    if ps:
        d = base.dist(theta[..., None, :], points)
    else:
        d = base.dist(theta[..., None], points)
    return np.min(d, axis=-1)


def make_pinch_general(base, system, seqs: PinchSequences, samples: int = 10_000, seed: int = 0) -> PinchFunctions:
    """Distance pinch curves; the closure of each sequence is its prefix plus ``theta*``."""
    seqs.check(base)
    ps = base.point_shape
    star = np.asarray(seqs.theta_star, dtype=base.dtype).reshape((1,) + ps)
    Sbar = np.concatenate([np.asarray(seqs.S, dtype=base.dtype).reshape((-1,) + ps), star])
    Tbar = np.concatenate([np.asarray(seqs.T, dtype=base.dtype).reshape((-1,) + ps), star])
    c = seqs.c

    def phi(theta):
        return system.gamma(theta) + c * set_distance(base, theta, Sbar)

    def psi(theta):
        return system.gamma(theta) - c * set_distance(base, theta, Tbar)

    pinch = PinchFunctions(seqs.theta_star, phi, psi, "distance")
    rng = np.random.default_rng(seed)
    probe = np.concatenate([base.random(rng, samples), Sbar, Tbar])
    try:
        pinch.check(system, probe)
    except PinchError as exc:
        raise PinchError(f"{exc}; try c < {c / 2:g}") from exc
    return pinch


def certified_properties(base) -> tuple:
    """Blow-up properties that hold for this base; pinching needs a minimal
    almost periodic base."""
    props = ("monotone", "injective", "segments", "semiconjugacy", "no_continuous_curve")
    return props + ("pinching",) if (base.minimal and base.almost_periodic) else props


def blowup_general(base, system, pinch, weights: WeightSequence | None = None, N: int = 40,
                   validate: bool = True) -> BlownUpSystem:
    if validate:
        check_aperiodic(base, pinch.theta_star)
    bsys = BlownUpSystem(system, pinch, weights or WeightSequence(), N)
    if validate:
        bsys.validate()
    return bsys


def default_general(base_name: str = "torus2", N: int = 40, weights: WeightSequence | None = None,
                    c: float = 0.35, K: int | None = None, lam: float = 0.5, validate: bool = True) -> BlownUpSystem:
    base = make_base(base_name)
    system = ForcedIntervalSystem(base=base, curve=default_curve(base), lam=lam)
    seqs = default_sequences(base, K=K, c=c)
    pinch = make_pinch_general(base, system, seqs)
    return blowup_general(base, system, pinch, weights, N, validate)


@dataclass(frozen=True)
class CrossCheck:
    label: str
    max_cdf_diff: float
    max_h_diff: float

    @property
    def worst(self) -> float:
        return max(self.max_cdf_diff, self.max_h_diff)


def cross_check_circle(reference: BlownUpSystem, evaluations: int = 1000, seed: int = 0) -> list:
    """Evaluate the circle blow-up through two other routes and compare:

    * orbits assembled by repeated single steps instead of closed form,
    * a torus translation whose curve and pinch depend on the first angle only.
    """
    rng = np.random.default_rng(seed)
    th = rng.random(evaluations)
    y = rng.random(evaluations)
    omega = reference.base.omega
    ts = reference.pinch.theta_star
    sysr = reference.system

    it_base = IteratedRotation(omega)
    it_sys = ForcedIntervalSystem(it_base, sysr.curve, sysr.lam, sysr.p, sysr.q)
    it_pinch = PinchFunctions(ts, reference.pinch.phi, reference.pinch.psi, reference.pinch.mode)
    iterated = BlownUpSystem(it_sys, it_pinch, reference.weights, reference.N)

    tor_base = TorusTranslation(omega, float(np.sqrt(2.0) - 1.0))
    tor_sys = ForcedIntervalSystem(tor_base, first_coordinate_curve, sysr.lam, sysr.p, sysr.q)
    circ_pinch = reference.pinch
    tor_pinch = PinchFunctions(np.array([ts, 0.7]),
                               lambda t: circ_pinch.phi(np.asarray(t)[..., 0]),
                               lambda t: circ_pinch.psi(np.asarray(t)[..., 0]),
                               reference.pinch.mode)
    torus = BlownUpSystem(tor_sys, tor_pinch, reference.weights, reference.N)
    th2 = np.stack([th, rng.random(evaluations)], axis=-1)

    ref_cdf = reference.mu_cdf(th, y)
    ref_h = reference.h(th, y)
    out = []
    for label, other, pts in (("iterated-orbit", iterated, th), ("torus-embedding", torus, th2)):
        out.append(CrossCheck(label,
                              float(np.max(np.abs(other.mu_cdf(pts, y) - ref_cdf))),
                              float(np.max(np.abs(other.h(pts, y) - ref_h)))))
    return out


def orbit_distance_to_blowups(bsys: BlownUpSystem, theta):
    """``min_{|n| <= N} d(theta, alpha^n theta*)``."""
    if bsys.N < 0:
        return np.full(np.shape(bsys.base.coordinate(theta)), np.inf)
    stars = bsys.base.orbit(np.asarray(bsys.pinch.theta_star, dtype=bsys.base.dtype), bsys.N)
    return set_distance(bsys.base, theta, stars)


def generic_fibres(bsys: BlownUpSystem, count: int, rng, delta: float = 1e-3):
    """Random fibres at distance > delta from every blown-up fibre."""
    out = []
    need = count
    while need > 0:
        th = bsys.base.random(rng, 4 * need)
        keep = th[orbit_distance_to_blowups(bsys, th) > delta]
        out.append(keep[:need])
        need -= keep[:need].shape[0]
    return np.concatenate(out)
