"""Time advancement of the projected model equations.

The viscous term is integrated exactly per mode through the factor
exp(-nu |k|^2 dt); advection and the eddy stress are explicit in a
two-stage second-order scheme (Heun on the transformed variable).
Advection uses the skew-symmetric average of the convective and
divergence forms, which conserves discrete energy under dealiasing.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InstabilityError
from .fields import VectorField, dealias, gradient, leray_project, zero_mean
from .model import flux_flat

_FFT_AXES = (-3, -2, -1)

# Row r of the symmetric-product storage: indices of (u_r u_x, u_r u_y, u_r u_z).
_SYM_ROWS = ((0, 1, 2), (1, 3, 4), (2, 4, 5))


@dataclass
class SimState:
    t: float
    u: VectorField
    step_index: int = 0


def taylor_green_velocity(grid, amplitude=1.0, mode=1):
    x, y, z = grid.coords()
    k = 2.0 * np.pi * mode / grid.length
    a = amplitude
    data = np.zeros((3,) + grid.real_shape)
    data[0] = a * np.sin(k * x) * np.cos(k * y) * np.cos(k * z)
    data[1] = -a * np.cos(k * x) * np.sin(k * y) * np.cos(k * z)
    return VectorField.from_real(grid, data)


def random_low_mode(grid, seed=0, rms=1.0, max_mode=2):
    """Divergence-free random field supported on modes up to max_mode.

    Deterministic for a fixed seed; scaled so the volume-mean square
    velocity is rms^2.
    """
    rng = np.random.default_rng(seed)
    shape = (3,) + grid.spectral_shape
    coeffs = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    keep = (
        (np.abs(grid.modes_x) <= max_mode)
        & (np.abs(grid.modes_y) <= max_mode)
        & (np.abs(grid.modes_z) <= max_mode)
    )
    v = VectorField.from_spectral(grid, coeffs * keep)
    v = leray_project(zero_mean(v))
    # force conjugate symmetry by a real-space round trip
    v = VectorField.from_real(grid, v.real)
    v = leray_project(v)
    mean_sq = kernels.sum_sq(v.flat_real()) * grid.cell_volume / grid.volume
    if mean_sq > 0.0:
        v = VectorField.from_real(grid, v.real * (rms / np.sqrt(mean_sq)))
    return v


INIT_KINDS = ("zero", "taylor_green", "random")


def initial_state(kind, grid, seed=0, amplitude=1.0):
    """Initial condition, always projected, zero-meaned, and dealiased."""
    if kind == "zero":
        return SimState(t=0.0, u=VectorField.zeros(grid), step_index=0)
    if kind == "taylor_green":
        u = taylor_green_velocity(grid, amplitude=amplitude)
    elif kind == "random":
        u = random_low_mode(grid, seed=seed, rms=amplitude)
    else:
        raise ValueError(f"initial condition must be one of {INIT_KINDS}, got {kind!r}")
    u = dealias(leray_project(zero_mean(u)))
    return SimState(t=0.0, u=u, step_index=0)


def _nonlinear_hat(u, force_hat, p):
    """Projected explicit right-hand side in spectral space.

    Skew-symmetric advection -(u . grad u + div(u u))/2 plus the model
    stress divergence plus the force, all dealiased and Leray-projected.
    The viscous term is excluded (handled by the integrating factor).
    """
    g = u.grid
    mask = g.dealias_mask
    ud = VectorField(g, spectral=u.spectral * mask)
    grad = gradient(ud)
    ur = ud.flat_real()
    gr = grad.real.reshape(9, -1)

    conv = kernels.convective(ur, gr)
    outer = kernels.outer_product_sym(ur)
    conv_hat = np.fft.rfftn(conv.reshape((3,) + g.real_shape), axes=_FFT_AXES) * mask
    outer_hat = np.fft.rfftn(outer.reshape((6,) + g.real_shape), axes=_FFT_AXES) * mask

    ks = (g.kx, g.ky, g.kz)
    rhs = np.empty((3,) + g.spectral_shape, dtype=np.complex128)
    for r in range(3):
        rows = _SYM_ROWS[r]
        div_outer = 1j * (
            ks[0] * outer_hat[rows[0]]
            + ks[1] * outer_hat[rows[1]]
            + ks[2] * outer_hat[rows[2]]
        )
        rhs[r] = -0.5 * (conv_hat[r] + div_outer)

    if p.coefficient > 0.0:
        flux = flux_flat(gr, p)
        flux_hat = np.fft.rfftn(flux.reshape((3, 3) + g.real_shape), axes=_FFT_AXES) * mask
        for r in range(3):
            rhs[r] += 1j * (
                ks[0] * flux_hat[r, 0] + ks[1] * flux_hat[r, 1] + ks[2] * flux_hat[r, 2]
            )

    if force_hat is not None:
        rhs += force_hat

    dot = (ks[0] * rhs[0] + ks[1] * rhs[1] + ks[2] * rhs[2]) * g.inv_k_sq
    for r in range(3):
        rhs[r] -= ks[r] * dot
    rhs[:, 0, 0, 0] = 0.0
    return rhs


def rhs_explicit(u, f, p):
    """Explicit right-hand side as a VectorField; f may be None."""
    g = u.grid
    fh = None if f is None else f.spectral * g.dealias_mask
    out = _nonlinear_hat(u, fh, p)
    if not np.all(np.isfinite(out)):
        raise InstabilityError("non-finite right-hand side")
    return VectorField(g, spectral=out)


def step(state, f, p, dt):
    """Advance one step of size dt; raises InstabilityError on blow-up."""
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    g = state.u.grid
    fh = None if f is None else f.spectral * g.dealias_mask
    decay = np.exp((-p.nu * dt) * g.k_sq)

    uh = state.u.spectral
    n0 = _nonlinear_hat(state.u, fh, p)
    u1 = VectorField(g, spectral=decay * (uh + dt * n0))
    n1 = _nonlinear_hat(u1, fh, p)
    new_hat = decay * uh + (0.5 * dt) * (decay * n0 + n1)

    if not np.all(np.isfinite(new_hat)):
        raise InstabilityError(
            f"non-finite state after step {state.step_index} at t={state.t:.6g}",
            t=state.t,
            step_index=state.step_index,
        )
    return SimState(t=state.t + dt, u=VectorField(g, spectral=new_hat), step_index=state.step_index + 1)


def cfl_dt(u, grid, p, safety=0.4, dt_max=np.inf, grad=None):
    """Stable explicit step: advective limit and the model's parabolic limit.

    dt = safety * min( spacing / max|u|,
                       spacing^2 / (2 (cs delta)^2 max|grad u| + tiny) )

    capped by dt_max. A quiescent field returns dt_max.
    """
    if not 0.0 < safety <= 1.0:
        raise ValueError(f"safety must lie in (0, 1], got {safety}")
    umax = kernels.max_magnitude(u.flat_real())
    advective = grid.spacing / umax if umax > 0.0 else np.inf
    if grad is None:
        grad = gradient(dealias(u))
    gmax = kernels.max_magnitude(grad.real.reshape(9, -1))
    with np.errstate(over="ignore"):
        parabolic = grid.spacing**2 / (2.0 * p.coefficient * gmax + 1e-300)
    dt = safety * min(advective, parabolic)
    return float(min(dt, dt_max))
