"""Pure numpy implementations of the per-grid-point kernels.

These are the reference versions: every kernel here must agree with its
numba twin to roundoff. All inputs are C-contiguous float64 arrays of
shape (ncomp, npoints); see the package docstring for the component
conventions.
"""

import numpy as np

# Row-major index pairs for the symmetric products: xx, xy, xz, yy, yz, zz.
SYM_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


def sum_sq(a):
    r = a.ravel()
    return float(np.dot(r, r))


def dot_sum(a, b):
    return float(np.dot(a.ravel(), b.ravel()))


def sum_magnitude_cubed(a):
    """Sum over points of the pointwise Euclidean magnitude cubed."""
    m2 = np.einsum("cp,cp->p", a, a)
    return float(np.sum(m2 * np.sqrt(m2)))


def max_magnitude(a):
    m2 = np.einsum("cp,cp->p", a, a)
    return float(np.sqrt(np.max(m2)))


def strain_magnitude_cubed(g):
    """Sum over points of |sym(g)|^3 for a (9, npoints) gradient."""
    s = 0.5 * (g + g.reshape(3, 3, -1).transpose(1, 0, 2).reshape(9, -1))
    m2 = np.einsum("cp,cp->p", s, s)
    return float(np.sum(m2 * np.sqrt(m2)))


def gradient_flux(g, coef):
    """coef * |g| * g, with |g| the pointwise Frobenius magnitude."""
    mag = np.sqrt(np.einsum("cp,cp->p", g, g))
    return (coef * mag) * g


def strain_flux(g, coef):
    """2 * coef * |sym(g)| * sym(g)."""
    s = 0.5 * (g + g.reshape(3, 3, -1).transpose(1, 0, 2).reshape(9, -1))
    mag = np.sqrt(np.einsum("cp,cp->p", s, s))
    return (2.0 * coef * mag) * s


def convective(u, g):
    """(u . grad) u: out[r] = sum_j u[j] * g[3r + j]."""
    return np.einsum("jp,rjp->rp", u, g.reshape(3, 3, -1))


def outer_product_sym(u):
    """The six distinct products u_i u_j, ordered as SYM_PAIRS."""
    return np.stack([u[i] * u[j] for i, j in SYM_PAIRS])
