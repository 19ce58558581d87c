"""Per-step dissipation records, windowed averages, and balance diagnostics.

Scalar records are cheap and taken every step; full-state force-balance
samples are taken at a coarser interval. Long-time averages are
dt-weighted trapezoidal means over [spinup, t_end]. The infinite-time
average is unobservable, so every average carries a convergence metric
(max relative drift of the running mean over the trailing half-window)
and the largest running mean seen there; no convergence is claimed
beyond that.
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import SchemaError
from .fields import dealias, gradient, inner_product, l2_norm_sq
from .model import dissipation_pair, flux_flat

SERIES_COLUMNS = ("t", "dt", "ke", "eps0", "epsdelta", "epsS", "fu", "usq")
FB_COLUMNS = ("t", "advective", "viscous", "model", "fu")
SUMMARY_SCHEMA = "smagbox-summary-1"


@dataclass(frozen=True)
class DissipationRecord:
    t: float
    dt: float
    ke: float
    eps0: float
    epsdelta: float
    epsS: float
    fu: float
    usq: float


@dataclass(frozen=True)
class TimeAverage:
    window_start: float
    window_end: float
    value: float
    convergence_metric: float
    running_max: float


@dataclass(frozen=True)
class ForceBalanceSample:
    t: float
    advective: float  # -(u u, grad f) / volume
    viscous: float  # nu (grad u, grad f) / volume
    model: float  # (model flux, grad f) / volume
    fu: float


@dataclass(frozen=True)
class ForceBalanceReport:
    transient: float
    advective: float
    viscous: float
    model: float
    total: float
    force_sq: float
    residual: float
    relative_residual: float
    status: str  # "ok" or "pre-stationary"


def record(state, force, p, dt=0.0, grad=None):
    """Scalar diagnostics of one state; epsS = eps0 + epsdelta exactly."""
    u = state.u
    vol = u.grid.volume
    usq = l2_norm_sq(u) / vol
    eps0, epsdelta = dissipation_pair(u, p, grad=grad)
    fu = 0.0 if force is None else inner_product(force.field, u) / vol
    return DissipationRecord(
        t=state.t,
        dt=dt,
        ke=0.5 * usq,
        eps0=eps0,
        epsdelta=epsdelta,
        epsS=eps0 + epsdelta,
        fu=fu,
        usq=usq,
    )


def series_arrays(series, field):
    ts = np.array([r.t for r in series])
    vs = np.array([getattr(r, field) for r in series])
    return ts, vs


def time_average(series, field, spinup):
    """dt-weighted trapezoidal mean of one record field over [spinup, t_end]."""
    ts, vs = series_arrays(series, field)
    return _windowed_average(ts, vs, spinup)


def _windowed_average(ts, vs, spinup):
    keep = ts >= spinup
    ts = ts[keep]
    vs = vs[keep]
    if ts.size < 2:
        raise ValueError(f"averaging window past spinup={spinup} holds fewer than two samples")
    t0 = float(ts[0])
    span = ts[-1] - t0
    # cumulative trapezoid gives the running mean at every sample
    steps = np.diff(ts)
    if np.any(steps <= 0.0):
        raise ValueError("time series must be strictly increasing")
    cum = np.concatenate(([0.0], np.cumsum(0.5 * steps * (vs[1:] + vs[:-1]))))
    running = cum[1:] / (ts[1:] - t0)
    value = float(running[-1])

    half = ts[1:] >= t0 + 0.5 * span
    tail = running[half]
    scale = max(abs(value), 1e-300)
    metric = float(np.max(np.abs(tail - value)) / scale)
    return TimeAverage(
        window_start=t0,
        window_end=float(ts[-1]),
        value=value,
        convergence_metric=metric,
        running_max=float(np.max(tail)),
    )


def energy_balance_residual(series, ke_start=None, ke_end=None):
    """ke_end + integral(epsS) - ke_start - integral(fu), trapezoidal."""
    ts, eps = series_arrays(series, "epsS")
    _, fu = series_arrays(series, "fu")
    if ke_start is None:
        ke_start = series[0].ke
    if ke_end is None:
        ke_end = series[-1].ke
    int_eps = float(np.trapezoid(eps, ts))
    int_fu = float(np.trapezoid(fu, ts))
    return ke_end + int_eps - ke_start - int_fu


def force_balance_sample(state, force, p, grad=None):
    """Projections of the momentum terms onto grad f at one instant."""
    u = state.u
    g = u.grid
    if grad is None:
        grad = gradient(dealias(u))
    scale = g.cell_volume / g.volume
    gradf = force.grad.real.reshape(9, -1)
    ur = u.flat_real()
    uu = np.einsum("ip,jp->ijp", ur, ur).reshape(9, -1)
    gr = grad.real.reshape(9, -1)
    advective = -kernels.dot_sum(uu, gradf) * scale
    viscous = p.nu * kernels.dot_sum(gr, gradf) * scale
    model = kernels.dot_sum(flux_flat(gr, p), gradf) * scale
    fu = inner_product(force.field, u) / g.volume
    return ForceBalanceSample(
        t=state.t, advective=advective, viscous=viscous, model=model, fu=fu
    )


def assemble_force_balance(samples, force_amplitude_sq, window_start=0.0):
    """Average the sampled terms over [window_start, t_end] and close the identity.

    The transient contribution needs no stored states: it is
    (fu(t_end) - fu(t_start)) / (t_end - t_start) from the sampled
    force-velocity pairing. The four terms should sum to F^2 once the
    flow is statistically steady; far from that the report is flagged
    "pre-stationary".
    """
    kept = [s for s in samples if s.t >= window_start]
    if len(kept) < 2:
        raise ValueError("force balance needs at least two samples past window_start")
    ts = np.array([s.t for s in kept])
    span = float(ts[-1] - ts[0])

    def mean(name):
        vals = np.array([getattr(s, name) for s in kept])
        return float(np.trapezoid(vals, ts)) / span

    transient = (kept[-1].fu - kept[0].fu) / span
    advective = mean("advective")
    viscous = mean("viscous")
    model = mean("model")
    total = transient + advective + viscous + model
    residual = total - force_amplitude_sq
    rel = residual / force_amplitude_sq if force_amplitude_sq > 0.0 else np.inf
    status = "ok" if abs(rel) <= 0.25 else "pre-stationary"
    return ForceBalanceReport(
        transient=transient,
        advective=advective,
        viscous=viscous,
        model=model,
        total=total,
        force_sq=force_amplitude_sq,
        residual=residual,
        relative_residual=rel,
        status=status,
    )


def force_balance_terms(states, force, p, window_start=0.0):
    """Force-balance report from a sequence of states sampled across a window."""
    samples = [force_balance_sample(s, force, p) for s in states]
    return assemble_force_balance(samples, force.F**2, window_start=window_start)


# ---------------------------------------------------------------------------
# spin-up estimation

def estimate_spinup(series, length_scale, turnovers=5.0, max_rounds=20):
    """Iteratively pick a spin-up cutoff of `turnovers` eddy-turnover times.

    The turnover time L/U depends on U, which is measured past the
    cutoff, so iterate to a fixed point. The cutoff is capped at half
    the run so a window always remains; returns (spinup, turnover,
    capped).
    """
    t_end = series[-1].t
    spinup = 0.0
    turnover = np.nan
    capped = False
    for _ in range(max_rounds):
        avg = time_average(series, "usq", spinup)
        u = float(np.sqrt(max(avg.value, 0.0)))
        if u == 0.0:
            return 0.0, np.nan, False
        turnover = length_scale / u
        target = turnovers * turnover
        capped = target > 0.5 * t_end
        new = min(target, 0.5 * t_end)
        if abs(new - spinup) <= 1e-3 * max(new, 1e-12):
            spinup = new
            break
        spinup = new
    return spinup, turnover, capped


# ---------------------------------------------------------------------------
# CSV io

def _format_row(values):
    return ",".join(f"{v:.17g}" for v in values) + "\n"


class _CsvWriter:
    columns = ()

    def __init__(self, path, append=False):
        self.path = path
        exists = False
        if append:
            try:
                with open(path, "r", encoding="ascii") as fh:
                    exists = fh.readline().strip() == ",".join(self.columns)
            except FileNotFoundError:
                pass
        self._fh = open(path, "a" if exists else "w", encoding="ascii")
        if not exists:
            self._fh.write(",".join(self.columns) + "\n")

    def write_values(self, values):
        self._fh.write(_format_row(values))

    def flush(self):
        self._fh.flush()

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class SeriesWriter(_CsvWriter):
    columns = SERIES_COLUMNS

    def write(self, rec):
        self.write_values(
            (rec.t, rec.dt, rec.ke, rec.eps0, rec.epsdelta, rec.epsS, rec.fu, rec.usq)
        )


class ForceBalanceWriter(_CsvWriter):
    columns = FB_COLUMNS

    def write(self, s):
        self.write_values((s.t, s.advective, s.viscous, s.model, s.fu))


def _read_csv(path, columns, factory):
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if tuple(header) != columns:
            raise SchemaError(
                f"{path}: header {header} does not match expected columns {list(columns)}"
            )
        return [factory(*(float(x) for x in row)) for row in reader if row]


def read_series(path):
    return _read_csv(path, SERIES_COLUMNS, DissipationRecord)


def read_force_balance(path):
    return _read_csv(path, FB_COLUMNS, ForceBalanceSample)


def truncate_csv_after(path, t_max):
    """Drop rows with t > t_max (recovery after an interrupted run)."""
    with open(path, "r", encoding="ascii", newline="") as fh:
        lines = fh.readlines()
    out = [lines[0]]
    for line in lines[1:]:
        if not line.strip():
            continue
        if float(line.split(",", 1)[0]) <= t_max:
            out.append(line)
    with open(path, "w", encoding="ascii") as fh:
        fh.writelines(out)


# ---------------------------------------------------------------------------
# summary assembly

def build_summary(series, fb_samples, *, nu, cs, delta, variant, F, L, spinup="auto"):
    """Structured run summary: scales, windowed averages, balance residuals.

    spinup is either "auto" (estimate 5 turnover times iteratively) or a
    fixed cutoff time. Convergence is declared only when the drift
    metrics of both the dissipation average and the mean-square velocity
    are below 1%.
    """
    if spinup == "auto":
        if L > 0.0:
            spinup_used, turnover0, capped = estimate_spinup(series, L)
        else:
            spinup_used, turnover0, capped = 0.0, np.nan, False
    else:
        spinup_used = float(spinup)
        capped = False

    averages = {}
    for field in ("epsS", "eps0", "epsdelta", "usq", "ke", "fu"):
        averages[field] = time_average(series, field, spinup_used)

    U = float(np.sqrt(max(averages["usq"].value, 0.0)))
    Re = L * U / nu if L > 0.0 else 0.0
    turnover = L / U if (U > 0.0 and L > 0.0) else np.nan
    window = averages["epsS"]
    window_turnovers = (
        (window.window_end - window.window_start) / turnover if np.isfinite(turnover) else 0.0
    )

    kes = [r.ke for r in series]
    residual = energy_balance_residual(series)
    ke_scale = max(max(kes), 1e-300)

    eps_metric = averages["epsS"].convergence_metric
    usq_metric = averages["usq"].convergence_metric
    converged = eps_metric < 0.01 and usq_metric < 0.01

    summary = {
        "schema": SUMMARY_SCHEMA,
        "t_end": series[-1].t,
        "n_samples": len(series),
        "nu": nu,
        "cs": cs,
        "delta": delta,
        "variant": variant,
        "F": F,
        "L": L,
        "U": U,
        "Re": Re,
        "turnover": None if not np.isfinite(turnover) else turnover,
        "spinup": spinup_used,
        "spinup_capped": capped,
        "window_start": window.window_start,
        "window_end": window.window_end,
        "window_turnovers": window_turnovers,
        "avg_epsS": averages["epsS"].value,
        "avg_eps0": averages["eps0"].value,
        "avg_epsdelta": averages["epsdelta"].value,
        "avg_usq": averages["usq"].value,
        "avg_ke": averages["ke"].value,
        "avg_fu": averages["fu"].value,
        "convergence_epsS": eps_metric,
        "convergence_usq": usq_metric,
        "running_max_epsS": averages["epsS"].running_max,
        "converged": converged,
        "energy_residual": residual,
        "energy_residual_rel": abs(residual) / ke_scale,
    }

    if fb_samples and F > 0.0:
        try:
            fb = assemble_force_balance(fb_samples, F**2, window_start=spinup_used)
        except ValueError:
            fb = None
        if fb is not None:
            summary.update(
                {
                    "fb_transient": fb.transient,
                    "fb_advective": fb.advective,
                    "fb_viscous": fb.viscous,
                    "fb_model": fb.model,
                    "fb_total": fb.total,
                    "fb_force_sq": fb.force_sq,
                    "fb_residual": fb.residual,
                    "fb_relative_residual": fb.relative_residual,
                    "fb_status": fb.status,
                }
            )
    return summary


def write_summary(path, summary):
    with open(path, "w", encoding="ascii") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_summary(path):
    with open(path, "r", encoding="ascii") as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or data.get("schema") != SUMMARY_SCHEMA:
        raise SchemaError(f"{path}: not a {SUMMARY_SCHEMA} summary")
    return data
