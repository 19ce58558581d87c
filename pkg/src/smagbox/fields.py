"""Scalar, vector, and rank-2 tensor fields with lazy real/spectral views.

A field owns at least one of the two representations and computes the
other on first access, caching it. Construction normalizes dtype and
memory layout so downstream kernels can take flat views safely.

Transforms follow the numpy convention: forward unnormalized, inverse
carries the 1/n^3. Derivative operators act in spectral space.
"""

import numpy as np

from .errors import GridMismatchError, ShapeError
from . import kernels

_FFT_AXES = (-3, -2, -1)


def _forward(values):
    return np.fft.rfftn(values, axes=_FFT_AXES)


def _inverse(values, n):
    return np.fft.irfftn(values, s=(n, n, n), axes=_FFT_AXES)


class _Field:
    component_shape: tuple = ()

    __slots__ = ("grid", "_real", "_spectral")

    def __init__(self, grid, real=None, spectral=None):
        if real is None and spectral is None:
            raise ValueError("field needs a real or a spectral array")
        self.grid = grid
        self._real = real
        self._spectral = spectral

    @classmethod
    def from_real(cls, grid, values):
        values = np.ascontiguousarray(values, dtype=np.float64)
        want = cls.component_shape + grid.real_shape
        if values.shape != want:
            raise ShapeError(f"expected real shape {want}, got {values.shape}")
        return cls(grid, real=values)

    @classmethod
    def from_spectral(cls, grid, values):
        values = np.ascontiguousarray(values, dtype=np.complex128)
        want = cls.component_shape + grid.spectral_shape
        if values.shape != want:
            raise ShapeError(f"expected spectral shape {want}, got {values.shape}")
        return cls(grid, spectral=values)

    @classmethod
    def zeros(cls, grid):
        shape = cls.component_shape + grid.spectral_shape
        return cls(grid, spectral=np.zeros(shape, dtype=np.complex128))

    @property
    def real(self):
        if self._real is None:
            self._real = _inverse(self._spectral, self.grid.n)
        return self._real

    @property
    def spectral(self):
        if self._spectral is None:
            self._spectral = _forward(self._real)
        return self._spectral

    def flat_real(self):
        """Real samples as a (ncomp, npoints) view for the kernels."""
        ncomp = int(np.prod(self.component_shape)) if self.component_shape else 1
        return self.real.reshape(ncomp, -1)

    def copy(self):
        r = None if self._real is None else self._real.copy()
        s = None if self._spectral is None else self._spectral.copy()
        return type(self)(self.grid, real=r, spectral=s)


class ScalarField(_Field):
    component_shape = ()


class VectorField(_Field):
    component_shape = (3,)


class TensorField(_Field):
    """Rank-2 field; first index is the component, second the direction."""

    component_shape = (3, 3)


def _same_grid(a, b):
    if a.grid != b.grid:
        raise GridMismatchError(f"{a.grid!r} vs {b.grid!r}")


def gradient(f):
    """Spectral gradient: scalar -> vector, vector -> tensor (rows d u_r / d x_c)."""
    g = f.grid
    fh = f.spectral
    ks = (g.kx, g.ky, g.kz)
    if isinstance(f, ScalarField):
        out = np.empty((3,) + g.spectral_shape, dtype=np.complex128)
        for c in range(3):
            out[c] = 1j * ks[c] * fh
        return VectorField(g, spectral=out)
    if isinstance(f, VectorField):
        out = np.empty((3, 3) + g.spectral_shape, dtype=np.complex128)
        for r in range(3):
            for c in range(3):
                out[r, c] = 1j * ks[c] * fh[r]
        return TensorField(g, spectral=out)
    raise ShapeError(f"gradient not defined for {type(f).__name__}")


def divergence(f):
    """Spectral divergence: vector -> scalar, tensor -> vector (contract direction)."""
    g = f.grid
    fh = f.spectral
    ks = (g.kx, g.ky, g.kz)
    if isinstance(f, VectorField):
        out = 1j * (ks[0] * fh[0] + ks[1] * fh[1] + ks[2] * fh[2])
        return ScalarField(g, spectral=out)
    if isinstance(f, TensorField):
        out = np.empty((3,) + g.spectral_shape, dtype=np.complex128)
        for r in range(3):
            out[r] = 1j * (ks[0] * fh[r, 0] + ks[1] * fh[r, 1] + ks[2] * fh[r, 2])
        return VectorField(g, spectral=out)
    raise ShapeError(f"divergence not defined for {type(f).__name__}")


def leray_project(v):
    """Remove the gradient part of a vector field and zero its mean mode.

    The result is divergence-free: k . w = 0 for every retained mode.
    """
    g = v.grid
    vh = v.spectral
    dot = g.kx * vh[0] + g.ky * vh[1] + g.kz * vh[2]
    dot *= g.inv_k_sq
    out = np.empty_like(vh)
    out[0] = vh[0] - g.kx * dot
    out[1] = vh[1] - g.ky * dot
    out[2] = vh[2] - g.kz * dot
    out[:, 0, 0, 0] = 0.0
    return VectorField(g, spectral=out)


def dealias(f):
    """Zero every mode beyond the two-thirds cutoff."""
    return type(f)(f.grid, spectral=f.spectral * f.grid.dealias_mask)


def zero_mean(f):
    """Zero the k = 0 mode of every component."""
    s = f.spectral.copy()
    s[..., 0, 0, 0] = 0.0
    return type(f)(f.grid, spectral=s)


def l2_norm_sq(f):
    """Riemann-sum squared L2 norm over the box."""
    return f.grid.cell_volume * kernels.sum_sq(f.flat_real())


def l3_norm_cubed(f):
    """Riemann-sum cubed L3 norm of the pointwise magnitude."""
    return f.grid.cell_volume * kernels.sum_magnitude_cubed(f.flat_real())


def linf_norm(f):
    """Largest pointwise magnitude on the grid."""
    return kernels.max_magnitude(f.flat_real())


def inner_product(a, b):
    """Riemann-sum L2 pairing of two fields of the same kind."""
    _same_grid(a, b)
    if type(a) is not type(b):
        raise ShapeError(f"cannot pair {type(a).__name__} with {type(b).__name__}")
    return a.grid.cell_volume * kernels.dot_sum(a.flat_real(), b.flat_real())


def l2_norm_sq_spectral(f):
    """Squared L2 norm summed over modes; equals l2_norm_sq by Parseval."""
    g = f.grid
    s = f.spectral
    total = np.sum(g.spectral_weight * (s.real**2 + s.imag**2))
    return float(total) * g.volume / float(g.n) ** 6
