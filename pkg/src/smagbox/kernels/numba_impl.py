"""Numba-compiled twins of the numpy kernels.

Same contracts as numpy_impl; explicit loops with prange over grid
points. No fastmath: reductions may reassociate across threads but each
term is computed in strict IEEE order, which keeps the two backends
within a few ulps of each other.
"""

import numpy as np
from numba import njit, prange

SYM_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


@njit(cache=True, parallel=True)
def sum_sq(a):
    ncomp, npts = a.shape
    total = 0.0
    for p in prange(npts):
        s = 0.0
        for c in range(ncomp):
            s += a[c, p] * a[c, p]
        total += s
    return total


@njit(cache=True, parallel=True)
def dot_sum(a, b):
    ncomp, npts = a.shape
    total = 0.0
    for p in prange(npts):
        s = 0.0
        for c in range(ncomp):
            s += a[c, p] * b[c, p]
        total += s
    return total


@njit(cache=True, parallel=True)
def sum_magnitude_cubed(a):
    ncomp, npts = a.shape
    total = 0.0
    for p in prange(npts):
        m2 = 0.0
        for c in range(ncomp):
            m2 += a[c, p] * a[c, p]
        total += m2 * np.sqrt(m2)
    return total


@njit(cache=True, parallel=True)
def max_magnitude(a):
    ncomp, npts = a.shape
    best = 0.0
    for p in prange(npts):
        m2 = 0.0
        for c in range(ncomp):
            m2 += a[c, p] * a[c, p]
        best = max(best, m2)
    return np.sqrt(best)


@njit(cache=True, parallel=True)
def strain_magnitude_cubed(g):
    npts = g.shape[1]
    total = 0.0
    for p in prange(npts):
        s00 = g[0, p]
        s11 = g[4, p]
        s22 = g[8, p]
        s01 = 0.5 * (g[1, p] + g[3, p])
        s02 = 0.5 * (g[2, p] + g[6, p])
        s12 = 0.5 * (g[5, p] + g[7, p])
        m2 = (s00 * s00 + s11 * s11 + s22 * s22
              + 2.0 * (s01 * s01 + s02 * s02 + s12 * s12))
        total += m2 * np.sqrt(m2)
    return total


@njit(cache=True, parallel=True)
def gradient_flux(g, coef):
    npts = g.shape[1]
    out = np.empty((9, npts))
    for p in prange(npts):
        m2 = 0.0
        for c in range(9):
            m2 += g[c, p] * g[c, p]
        f = coef * np.sqrt(m2)
        for c in range(9):
            out[c, p] = f * g[c, p]
    return out


@njit(cache=True, parallel=True)
def strain_flux(g, coef):
    npts = g.shape[1]
    out = np.empty((9, npts))
    for p in prange(npts):
        s00 = g[0, p]
        s11 = g[4, p]
        s22 = g[8, p]
        s01 = 0.5 * (g[1, p] + g[3, p])
        s02 = 0.5 * (g[2, p] + g[6, p])
        s12 = 0.5 * (g[5, p] + g[7, p])
        m2 = (s00 * s00 + s11 * s11 + s22 * s22
              + 2.0 * (s01 * s01 + s02 * s02 + s12 * s12))
        f = 2.0 * coef * np.sqrt(m2)
        out[0, p] = f * s00
        out[1, p] = f * s01
        out[2, p] = f * s02
        out[3, p] = f * s01
        out[4, p] = f * s11
        out[5, p] = f * s12
        out[6, p] = f * s02
        out[7, p] = f * s12
        out[8, p] = f * s22
    return out


@njit(cache=True, parallel=True)
def convective(u, g):
    npts = u.shape[1]
    out = np.empty((3, npts))
    for p in prange(npts):
        for r in range(3):
            acc = 0.0
            for j in range(3):
                acc += u[j, p] * g[3 * r + j, p]
            out[r, p] = acc
    return out


@njit(cache=True, parallel=True)
def outer_product_sym(u):
    npts = u.shape[1]
    out = np.empty((6, npts))
    for p in prange(npts):
        u0 = u[0, p]
        u1 = u[1, p]
        u2 = u[2, p]
        out[0, p] = u0 * u0
        out[1, p] = u0 * u1
        out[2, p] = u0 * u2
        out[3, p] = u1 * u1
        out[4, p] = u1 * u2
        out[5, p] = u2 * u2
    return out
