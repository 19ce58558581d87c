"""Analytic body-force families and the derived force scales F and L.

All families are smooth, divergence-free, zero-mean, and built from a
single integer mode so they survive dealiasing untouched. The scales
are

    F = ( ||f||^2 / volume )^(1/2)
    L = min( volume^(1/3),
             F / ||grad f||_inf,
             F / (||grad f||^2 / volume)^(1/2),
             F / (||grad f||_3^3 / volume)^(1/3) )

which by construction satisfy grad-norm inequalities of the form
||grad f||_inf <= F / L (and the L2/L3 analogues).
"""

from dataclasses import dataclass

import numpy as np

from .fields import (
    TensorField,
    VectorField,
    gradient,
    l2_norm_sq,
    l3_norm_cubed,
    linf_norm,
)

FAMILIES = ("single_mode_shear", "taylor_green", "abc_like")


@dataclass(frozen=True)
class ForceScales:
    F: float
    candidates: tuple  # (box, from linf, from rms, from l3)
    L: float


@dataclass(frozen=True, eq=False)
class ForceSpec:
    """An immutable force field together with its derived scales."""

    family: str
    amplitude: float
    mode: int
    field: VectorField
    grad: TensorField
    F: float
    L: float
    candidates: tuple


def _profiles(family, amplitude, mode, grid):
    x, y, z = grid.coords()
    k = 2.0 * np.pi * mode / grid.length
    a = amplitude
    shape = grid.real_shape
    f = np.zeros((3,) + shape)
    if family == "single_mode_shear":
        f[0] = np.broadcast_to(a * np.sin(k * z), shape)
    elif family == "taylor_green":
        f[0] = a * np.sin(k * x) * np.cos(k * y) * np.cos(k * z)
        f[1] = -a * np.cos(k * x) * np.sin(k * y) * np.cos(k * z)
    elif family == "abc_like":
        f[0] = np.broadcast_to(a * (np.sin(k * z) + np.cos(k * y)), shape)
        f[1] = np.broadcast_to(a * (np.sin(k * x) + np.cos(k * z)), shape)
        f[2] = np.broadcast_to(a * (np.sin(k * y) + np.cos(k * x)), shape)
    else:
        raise ValueError(f"force family must be one of {FAMILIES}, got {family!r}")
    return f


def force_scale_report(f):
    """F, the four L candidates, and their minimum L for a force field."""
    g = f.grid
    F = float(np.sqrt(l2_norm_sq(f) / g.volume))
    if F == 0.0:
        raise ValueError("force is identically zero; its length scale is undefined")
    grad = gradient(f)
    g_inf = linf_norm(grad)
    g_rms = float(np.sqrt(l2_norm_sq(grad) / g.volume))
    g_l3 = float((l3_norm_cubed(grad) / g.volume) ** (1.0 / 3.0))

    def ratio(d):
        return F / d if d > 0.0 else np.inf

    candidates = (
        g.volume ** (1.0 / 3.0),
        ratio(g_inf),
        ratio(g_rms),
        ratio(g_l3),
    )
    return ForceScales(F=F, candidates=candidates, L=float(min(candidates)))


def force_scales(f):
    """The (F, L) pair; see force_scale_report for the candidate list."""
    r = force_scale_report(f)
    return r.F, r.L


def make_force(family, amplitude, mode, grid):
    """Build a ForceSpec on the given grid.

    The mode must sit at or below the dealias cutoff so the force is
    exactly representable in the retained spectrum.
    """
    if not amplitude > 0.0:
        raise ValueError(f"force amplitude must be positive, got {amplitude}")
    mode = int(mode)
    if mode < 1 or mode > grid.dealias_cutoff:
        raise ValueError(
            f"force mode must lie in [1, {grid.dealias_cutoff}] "
            f"(dealias cutoff for n={grid.n}), got {mode}"
        )
    field = VectorField.from_real(grid, _profiles(family, amplitude, mode, grid))
    scales = force_scale_report(field)
    return ForceSpec(
        family=family,
        amplitude=float(amplitude),
        mode=mode,
        field=field,
        grad=gradient(field),
        F=scales.F,
        L=scales.L,
        candidates=scales.candidates,
    )
