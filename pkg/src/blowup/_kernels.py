"""Compiled fibre-measure CDF and quantile loops.

Each unique fibre ``theta`` is described by rows over its base orbit
``alpha^{j-N} theta``, ``j = 0..2N``:

* ``G[f, j]``   curve value gamma at orbit point j,
* ``PHI, PSI``  upper/lower pinch values at orbit point j,
* ``W[j]``      weight of the term with index ``n = N - j``,
* ``dj[f]``     orbit index carrying the Dirac term (-1 if the fibre is not blown up),
* ``atom[f]``   position of that atom in the fibre.

``kind == 0``: interval fibres with the piecewise linear contraction
(``lam``, ``p``, ``q``); ``kind == 1``: circle fibres rotated by ``rho``.
"""

import numpy as np
from numba import njit

INTERVAL = 0
CIRCLE = 1


@njit(cache=True, nogil=True)
def fibre_forward(z, g0, g1, lam, p, q):
    fp = g1 + lam * (p - g0)
    fq = g1 + lam * (q - g0)
    if z <= p:
        return z * fp / p
    if z >= q:
        return fq + (z - q) * (1.0 - fq) / (1.0 - q)
    return g1 + lam * (z - g0)


@njit(cache=True, nogil=True)
def fibre_inverse(z, g0, g1, lam, p, q):
    fp = g1 + lam * (p - g0)
    fq = g1 + lam * (q - g0)
    if z <= fp:
        return z * p / fp
    if z >= fq:
        return q + (z - fq) * (1.0 - q) / (1.0 - fq)
    return g0 + (z - g1) / lam


@njit(cache=True, nogil=True)
def _uniform(z, lo, hi, g):
    if hi > lo:
        u = (z - lo) / (hi - lo)
        if u < 0.0:
            return 0.0
        if u > 1.0:
            return 1.0
        return u
    # degenerate band: Dirac at the curve
    return 1.0 if z >= g else 0.0


@njit(cache=True, nogil=True)
def _uniform_lift(z, lo, hi, g):
    k = np.floor(z)
    return k + _uniform(z - k, lo, hi, g)


@njit(cache=True, nogil=True)
def _cdf_one(y, left, f, G, PHI, PSI, W, bprime, dj, atom, N, kind, lam, p, q, rho):
    if N < 0:
        return y
    d = dj[f]
    total = bprime * y
    if kind == INTERVAL:
        z = y
        for k in range(N + 1):
            j = N - k
            if k > 0:
                z = fibre_inverse(z, G[f, j], G[f, j + 1], lam, p, q)
            if j != d:
                total += W[j] * _uniform(z, PSI[f, j], PHI[f, j], G[f, j])
        z = y
        for k in range(1, N + 1):
            j = N + k
            z = fibre_forward(z, G[f, j - 1], G[f, j], lam, p, q)
            if j != d:
                total += W[j] * _uniform(z, PSI[f, j], PHI[f, j], G[f, j])
    else:
        for j in range(2 * N + 1):
            if j == d:
                continue
            shift = (N - j) * rho
            lo, hi, g = PSI[f, j], PHI[f, j], G[f, j]
            total += W[j] * (_uniform_lift(y - shift, lo, hi, g) - _uniform_lift(-shift, lo, hi, g))
    if d >= 0:
        a = atom[f]
        if (left and y > a) or ((not left) and y >= a):
            total += W[d]
    if total > 1.0:
        total = 1.0
    return total


@njit(cache=True, nogil=True)
def cdf_batch(y, fi, left, G, PHI, PSI, W, bprime, dj, atom, N, kind, lam, p, q, rho):
    out = np.empty(y.shape[0])
    for i in range(y.shape[0]):
        out[i] = _cdf_one(y[i], left, fi[i], G, PHI, PSI, W, bprime, dj, atom,
                          N, kind, lam, p, q, rho)
    return out


@njit(cache=True, nogil=True)
def quantile_batch(x, fi, G, PHI, PSI, W, bprime, dj, atom, N, kind, lam, p, q, rho, tol):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        xi = x[i]
        f = fi[i]
        if xi <= 0.0:
            out[i] = 0.0
            continue
        if xi >= 1.0:
            out[i] = 1.0
            continue
        if N < 0:
            out[i] = xi
            continue
        d = dj[f]
        below = False
        a = 0.0
        if d >= 0 and W[d] > 0.0:
            a = atom[f]
            lo = _cdf_one(a, True, f, G, PHI, PSI, W, bprime, dj, atom, N, kind, lam, p, q, rho)
            hi = _cdf_one(a, False, f, G, PHI, PSI, W, bprime, dj, atom, N, kind, lam, p, q, rho)
            if lo <= xi <= hi:
                out[i] = a
                continue
            below = xi < lo
        a0, b0 = 0.0, 1.0
        while b0 - a0 > tol:
            mid = 0.5 * (a0 + b0)
            if _cdf_one(mid, False, f, G, PHI, PSI, W, bprime, dj, atom,
                        N, kind, lam, p, q, rho) >= xi:
                b0 = mid
            else:
                a0 = mid
        if below and b0 >= a:
            # the exact quantile lies strictly left of the atom
            b0 = np.nextafter(a, -np.inf)
        out[i] = b0
    return out
