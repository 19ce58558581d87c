"""Run orchestration: the time loop, its output files, and restart.

A run directory holds:

    run_meta.json       resolved config plus force scales (schema-tagged)
    series.csv          one scalar record per step
    forcebalance.csv    coarser force-balance samples
    snapshot-<k>.dat    periodic snapshots (k = interval index), if enabled
    checkpoint.dat      rolling restart point, rewritten at snapshot times
                        and at the end (or at the last good state on
                        instability)
    summary.json        windowed averages and balance residuals

Determinism: the step size, sample times, and snapshot times are all
derived from the current state, so restarting from checkpoint.dat
reproduces the uninterrupted series bit for bit at matching steps.
"""

import json
import os
import sys
from dataclasses import dataclass

from . import statistics as stats
from .config import config_as_dict, config_from_dict, with_updates
from .errors import ConfigError, InstabilityError, SchemaError
from .fields import dealias, gradient
from .forcing import make_force
from .grid import Grid
from .integrator import cfl_dt, initial_state, step, SimState
from .model import ModelParams
from .snapshot import read_checkpoint, write_checkpoint, write_snapshot

META_SCHEMA = "smagbox-meta-1"
_TIME_EPS = 1e-9


@dataclass
class RunResult:
    outdir: str
    summary: dict
    steps_taken: int
    completed: bool  # False when max_steps stopped the run early


def _paths(outdir):
    return {
        "meta": os.path.join(outdir, "run_meta.json"),
        "series": os.path.join(outdir, "series.csv"),
        "fb": os.path.join(outdir, "forcebalance.csv"),
        "checkpoint": os.path.join(outdir, "checkpoint.dat"),
        "summary": os.path.join(outdir, "summary.json"),
    }


def build_problem(cfg):
    """Grid, model parameters, and force (None when amplitude is 0)."""
    grid = Grid(cfg.grid_n, cfg.box_length)
    delta = cfg.delta
    if 0.0 < delta < 2.0 * grid.spacing:
        print(
            f"warning: model.delta={delta:.6g} is below twice the grid spacing "
            f"({2.0 * grid.spacing:.6g}); the model term is unresolved",
            file=sys.stderr,
        )
    params = ModelParams(nu=cfg.fluid_nu, cs=cfg.model_cs, delta=delta,
                         variant=cfg.model_variant)
    if cfg.force_amplitude > 0.0:
        try:
            force = make_force(cfg.force_family, cfg.force_amplitude,
                               cfg.force_mode, grid)
        except ValueError as exc:
            raise ConfigError("force.mode", str(exc)) from exc
    else:
        force = None
    return grid, params, force


def write_meta(path, cfg, force):
    meta = {
        "schema": META_SCHEMA,
        "config": {k: v for k, v in config_as_dict(cfg).items()},
        "force_F": 0.0 if force is None else force.F,
        "force_L": 0.0 if force is None else force.L,
        "force_candidates": [] if force is None else list(force.candidates),
    }
    with open(path, "w", encoding="ascii") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_meta(path):
    with open(path, "r", encoding="ascii") as fh:
        meta = json.load(fh)
    if not isinstance(meta, dict) or meta.get("schema") != META_SCHEMA:
        raise SchemaError(f"{path}: not a {META_SCHEMA} file")
    return meta


def _next_index(t, interval):
    """Smallest k with k * interval > t (tolerating roundoff at multiples)."""
    return int(t / interval + _TIME_EPS) + 1


def _loop(grid, params, force, state, cfg, paths, *, append, last_dt=0.0,
          max_steps=None):
    t_end = cfg.time_t_end
    fb_interval = cfg.stats_sample_interval
    snap_interval = cfg.output_snapshot_interval
    next_fb = _next_index(state.t, fb_interval) if append else 0
    next_snap = _next_index(state.t, snap_interval) if snap_interval > 0.0 else None

    steps_taken = 0
    dt = last_dt
    stopped_early = False
    with stats.SeriesWriter(paths["series"], append=append) as series_out, \
            stats.ForceBalanceWriter(paths["fb"], append=append) as fb_out:
        first = True
        while True:
            grad = gradient(dealias(state.u))
            remaining = t_end - state.t
            at_end = remaining <= _TIME_EPS * max(1.0, abs(t_end))
            done = at_end
            if not done and max_steps is not None and steps_taken >= max_steps:
                done = True
                stopped_early = True
            if at_end:
                dt_next = 0.0
            else:
                # computed even when pausing on max_steps, so the recorded
                # dt column matches the uninterrupted run bit for bit
                dt_next = cfl_dt(state.u, grid, params,
                                 safety=cfg.time_cfl_safety,
                                 dt_max=cfg.time_dt_max, grad=grad)
                dt_next = min(dt_next, remaining)

            skip = append and first
            if not skip:
                series_out.write(stats.record(state, force, params,
                                              dt=dt_next, grad=grad))
                if force is not None and state.t + _TIME_EPS >= next_fb * fb_interval:
                    fb_out.write(stats.force_balance_sample(state, force, params,
                                                            grad=grad))
                    next_fb = _next_index(state.t, fb_interval)
                if next_snap is not None and state.t + _TIME_EPS >= next_snap * snap_interval:
                    write_snapshot(os.path.join(paths["outdir"],
                                                f"snapshot-{next_snap:05d}.dat"),
                                   state.u, state.t)
                    write_checkpoint(paths["checkpoint"], state.u, state.t,
                                     state.step_index, dt)
                    next_snap = _next_index(state.t, snap_interval)
            first = False

            if done:
                break
            try:
                state = step(state, None if force is None else force.field,
                             params, dt_next)
            except InstabilityError:
                series_out.flush()
                fb_out.flush()
                write_checkpoint(paths["checkpoint"], state.u, state.t,
                                 state.step_index, dt)
                raise
            dt = dt_next
            steps_taken += 1

    write_checkpoint(paths["checkpoint"], state.u, state.t, state.step_index, dt)
    return state, steps_taken, stopped_early


def _summarize(cfg, params, force, paths):
    series = stats.read_series(paths["series"])
    fb_samples = stats.read_force_balance(paths["fb"]) if os.path.exists(paths["fb"]) else []
    summary = stats.build_summary(
        series,
        fb_samples,
        nu=params.nu,
        cs=params.cs,
        delta=params.delta,
        variant=params.variant,
        F=0.0 if force is None else force.F,
        L=0.0 if force is None else force.L,
        spinup=cfg.stats_spinup,
    )
    stats.write_summary(paths["summary"], summary)
    return summary


def run_simulation(cfg, *, max_steps=None):
    """Fresh run from the configured initial condition."""
    outdir = cfg.output_dir
    os.makedirs(outdir, exist_ok=True)
    paths = _paths(outdir)
    paths["outdir"] = outdir

    grid, params, force = build_problem(cfg)
    write_meta(paths["meta"], cfg, force)
    state = initial_state(cfg.init_kind, grid, seed=cfg.init_seed)

    state, steps_taken, stopped_early = _loop(
        grid, params, force, state, cfg, paths, append=False, max_steps=max_steps
    )
    summary = _summarize(cfg, params, force, paths)
    return RunResult(outdir=outdir, summary=summary, steps_taken=steps_taken,
                     completed=not stopped_early)


def resume_simulation(outdir, *, t_end=None, max_steps=None):
    """Continue a run from its checkpoint, appending to its series.

    Rows beyond the checkpoint time (possible after a crash that
    happened past the last rolling checkpoint) are dropped before
    appending, so the series stays consistent with the trajectory.
    """
    paths = _paths(outdir)
    paths["outdir"] = outdir
    meta = read_meta(paths["meta"])
    cfg = config_from_dict(meta["config"])
    if t_end is not None:
        cfg = with_updates(cfg, time_t_end=float(t_end))
    grid, params, force = build_problem(cfg)
    u, t, step_index, last_dt = read_checkpoint(paths["checkpoint"], grid)
    state = SimState(t=t, u=u, step_index=step_index)

    stats.truncate_csv_after(paths["series"], t)
    if os.path.exists(paths["fb"]):
        stats.truncate_csv_after(paths["fb"], t)
    write_meta(paths["meta"], cfg, force)

    state, steps_taken, stopped_early = _loop(
        grid, params, force, state, cfg, paths, append=True, last_dt=last_dt,
        max_steps=max_steps
    )
    summary = _summarize(cfg, params, force, paths)
    return RunResult(outdir=outdir, summary=summary, steps_taken=steps_taken,
                     completed=not stopped_early)


def analyze_series(series_path, *, meta_path=None, out_path=None, spinup=None):
    """Summary from an existing series file plus its run metadata."""
    base = os.path.dirname(os.path.abspath(series_path))
    if meta_path is None:
        meta_path = os.path.join(base, "run_meta.json")
    if out_path is None:
        out_path = os.path.join(base, "summary.json")
    meta = read_meta(meta_path)
    cfg = config_from_dict(meta["config"])
    if spinup is not None:
        cfg = with_updates(cfg, stats_spinup=spinup)
    series = stats.read_series(series_path)
    fb_path = os.path.join(base, "forcebalance.csv")
    fb_samples = stats.read_force_balance(fb_path) if os.path.exists(fb_path) else []
    summary = stats.build_summary(
        series,
        fb_samples,
        nu=cfg.fluid_nu,
        cs=cfg.model_cs,
        delta=cfg.delta,
        variant=cfg.model_variant,
        F=meta["force_F"],
        L=meta["force_L"],
        spinup=cfg.stats_spinup,
    )
    stats.write_summary(out_path, summary)
    return summary
