"""One-dimensional hybrid measures: an atomic part plus an absolutely continuous part.

Measures live on [0, 1] (interval) or on the circle in cut coordinates [0, 1).
Everything is driven by the distribution function ``y -> m[0, y]``; the
quantile (generalised inverse) is found by bisection on it, and push-forwards
under monotone maps are composed exactly on the CDF level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

QUANTILE_TOL = 1e-12
MASS_TOL = 1e-12

ArrayFn = Callable[[np.ndarray], np.ndarray]


class DomainError(ValueError):
    """Argument outside [0, 1]."""


class PreconditionError(ValueError):
    """Measure lacks full topological support."""


class OracleError(RuntimeError):
    """A monotone map oracle failed to evaluate."""


def wrap(x):
    """Reduce to [0, 1); guards against ``-1e-17 % 1 == 1.0``."""
    r = np.mod(x, 1.0)
    return np.where(r >= 1.0, 0.0, r)


def circle_dist(a, b):
    d = np.abs(wrap(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))
    return np.minimum(d, 1.0 - d)


def _check_unit(y, what="y"):
    y = np.asarray(y, dtype=float)
    if np.any(~np.isfinite(y)) or np.any(y < 0.0) or np.any(y > 1.0):
        raise DomainError(f"{what} must lie in [0, 1]")
    return y


def lebesgue_cdf(y):
    return np.clip(np.asarray(y, dtype=float), 0.0, 1.0)


@dataclass(frozen=True)
class HybridMeasure:
    """Finite atomic part plus an absolutely continuous CDF oracle.

    ``tail_bound`` certifies the mass of atoms dropped by truncation; the
    balance ``sum(masses) + ac_cdf(1) == total_mass`` must hold up to it.
    """

    positions: np.ndarray
    masses: np.ndarray
    ac_cdf: ArrayFn
    total_mass: float = 1.0
    tail_bound: float = 0.0
    circle: bool = False
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pos = np.atleast_1d(np.asarray(self.positions, dtype=float))
        mas = np.atleast_1d(np.asarray(self.masses, dtype=float))
        if pos.shape != mas.shape:
            raise ValueError("positions and masses differ in length")
        if np.any(mas <= 0.0):
            raise ValueError("atom masses must be positive")
        if np.any(pos < 0.0) or np.any(pos > 1.0) or (self.circle and np.any(pos >= 1.0)):
            raise DomainError("atom positions outside the domain")
        order = np.argsort(pos, kind="stable")
        pos, mas = pos[order], mas[order]
        if np.any(np.diff(pos) <= 0.0):
            raise ValueError("atom positions must be pairwise distinct")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "masses", mas)
        object.__setattr__(self, "_cum", np.concatenate([[0.0], np.cumsum(mas)]))
        ac_total = float(np.asarray(self.ac_cdf(np.array([1.0])))[0])
        unaccounted = self.total_mass - (self._cum[-1] + ac_total)
        if unaccounted < -MASS_TOL or unaccounted > self.tail_bound + MASS_TOL:
            raise ValueError(f"mass balance violated by {unaccounted:.3e}")

    @property
    def atom_mass(self) -> float:
        return float(self._cum[-1])

    @cached_property
    def has_full_support(self) -> bool:
        grid = np.linspace(0.0, 1.0, 4097)
        return bool(np.all(np.diff(np.asarray(self.ac_cdf(grid), dtype=float)) > 0.0))

    def cdf(self, y):
        return cdf(self, y)

    def cdf_left(self, y):
        return cdf_left(self, y)

    def quantile(self, x, tol=QUANTILE_TOL):
        return quantile(self, x, tol)

    def atom_at(self, y):
        """Mass of the atom sitting exactly at ``y`` (0 if none)."""
        y = np.asarray(y, dtype=float)
        if self.positions.size == 0:
            return np.zeros_like(y)
        i = np.minimum(np.searchsorted(self.positions, y), self.positions.size - 1)
        return np.where(self.positions[i] == y, self.masses[i], 0.0)


def _cdf(m: HybridMeasure, y: np.ndarray, side: str) -> np.ndarray:
    k = np.searchsorted(m.positions, y, side=side)
    return np.asarray(m.ac_cdf(y), dtype=float) + m._cum[k]


def cdf(m: HybridMeasure, y):
    """``m[0, y]``, right-continuous."""
    y = _check_unit(y)
    return _cdf(m, y, "right")


def cdf_left(m: HybridMeasure, y):
    """``m[0, y)``: the CDF without an atom sitting at ``y``."""
    y = _check_unit(y)
    return _cdf(m, y, "left")


def preimage_interval(m: HybridMeasure, y):
    """The level set of the quantile over ``y``: ``[m[0, y), m[0, y]]``."""
    y = _check_unit(y)
    if not m.has_full_support:
        raise PreconditionError("preimage intervals need full support")
    return _cdf(m, y, "left"), _cdf(m, y, "right")


def bisect_quantile(F: ArrayFn, x: np.ndarray, tol: float = QUANTILE_TOL,
                    lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """min{y in [lo, hi] : F(y) >= x} for nondecreasing F, vectorised bisection."""
    x = np.asarray(x, dtype=float)
    a = np.full(x.shape, lo)
    b = np.full(x.shape, hi)
    done = np.asarray(F(a)) >= x
    b = np.where(done, a, b)
    while True:
        active = (b - a > tol) & ~done
        if not np.any(active):
            break
        mid = 0.5 * (a + b)
        up = np.asarray(F(mid)) >= x
        b = np.where(active & up, mid, b)
        a = np.where(active & ~up, mid, a)
    return b


def quantile(m: HybridMeasure, x, tol: float = QUANTILE_TOL):
    """Generalised inverse ``min{y : m[0, y] >= x}``.

    Points of a plateau (``x`` inside ``[m[0,p), m[0,p]]`` for an atom ``p``)
    are returned as ``p`` exactly; elsewhere the bisection error is <= tol.
    """
    x = _check_unit(x, "x")
    if not m.has_full_support:
        raise PreconditionError("quantile needs a measure of full support")
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    y = bisect_quantile(lambda z: _cdf(m, z, "right"), x, tol)
    if m.positions.size:
        lo = _cdf(m, m.positions, "left")
        hi = _cdf(m, m.positions, "right")
        i = np.searchsorted(lo, x, side="right") - 1
        ic = np.clip(i, 0, None)
        on = (i >= 0) & (x <= hi[ic])
        y = np.where(on, m.positions[ic], y)
        # below a plateau the exact quantile is strictly left of its atom; keep
        # the bisection result there so cdf(quantile(x)) cannot jump across it
        nxt = np.minimum(i + 1, m.positions.size - 1)
        guard = ~on & (x < lo[nxt]) & (y >= m.positions[nxt])
        y = np.where(guard, np.nextafter(m.positions[nxt], -np.inf), y)
    return y[0] if scalar else y


@dataclass(frozen=True)
class MonotoneMapOracle:
    """Continuous strictly increasing map with its inverse.

    For ``circle=True`` both callables are degree-one lifts R -> R and the map
    acts on cut coordinates [0, 1) modulo 1.
    """

    forward: ArrayFn
    inverse: ArrayFn
    circle: bool = False

    def __call__(self, y):
        v = self.forward(np.asarray(y, dtype=float))
        return wrap(v) if self.circle else v

    def inv(self, y):
        v = self.inverse(np.asarray(y, dtype=float))
        return wrap(v) if self.circle else v


IDENTITY = MonotoneMapOracle(lambda y: y, lambda y: y)


def _lift_cdf(F: ArrayFn, total: float, circle: bool) -> ArrayFn:
    if not circle:
        return lambda z: np.asarray(F(np.clip(z, 0.0, 1.0)), dtype=float)

    def lifted(z):
        k = np.floor(z)
        return k * total + np.asarray(F(z - k), dtype=float)

    return lifted


def pushforward(m: HybridMeasure, g: MonotoneMapOracle) -> HybridMeasure:
    """Image measure ``m o g^{-1}``: atoms move to ``g(p)``, the continuous part
    is transported through ``ac(g^{-1}(y)) - ac(g^{-1}(0))`` on lifts."""
    circle = m.circle or g.circle
    ac_total = float(np.asarray(m.ac_cdf(np.array([1.0])))[0])
    ac_lift = _lift_cdf(m.ac_cdf, ac_total, circle)

    def _inv(y):
        try:
            v = np.asarray(g.inverse(np.asarray(y, dtype=float)), dtype=float)
        except Exception as exc:  # noqa: BLE001 - re-raised with context
            raise OracleError(f"inverse evaluation failed: {exc}") from exc
        if np.any(~np.isfinite(v)):
            raise OracleError("inverse returned non-finite values")
        return v

    base = float(_inv(np.array([0.0]))[0])
    offset = float(ac_lift(np.array([base]))[0])

    def ac(y):
        return ac_lift(_inv(y)) - offset

    pos = np.asarray(g.forward(m.positions), dtype=float)
    pos = wrap(pos) if circle else np.clip(pos, 0.0, 1.0)
    return HybridMeasure(pos, m.masses.copy(), ac, m.total_mass, m.tail_bound, circle)


def lebesgue(circle: bool = False) -> HybridMeasure:
    return HybridMeasure(np.empty(0), np.empty(0), lebesgue_cdf, circle=circle)


def atoms_plus_lebesgue(positions, masses, b: float, tail_bound: float = 0.0,
                        circle: bool = False) -> HybridMeasure:
    """``sum masses_i delta_{p_i} + b Leb``."""
    return HybridMeasure(np.asarray(positions, float), np.asarray(masses, float),
                         lambda y: b * np.clip(np.asarray(y, float), 0.0, 1.0),
                         1.0, tail_bound, circle)
