"""Run configuration: flat dotted keys from a text file plus flag overrides.

The config file format is one `key = value` pair per line, `#` comments
allowed. Every key can also be given on the command line as a flag of
the same name (`--grid.n 64`). Command-line values win over the file,
which wins over the defaults below.
"""

import math
from dataclasses import dataclass, replace

from .errors import ConfigError
from .forcing import FAMILIES
from .integrator import INIT_KINDS
from .model import VARIANTS


def _positive(kind):
    def parse(raw):
        v = kind(raw)
        if not v > 0:
            raise ValueError("must be positive")
        return v

    return parse


def _nonneg(kind):
    def parse(raw):
        v = kind(raw)
        if v < 0:
            raise ValueError("must be nonnegative")
        return v

    return parse


def _enum(options):
    def parse(raw):
        if raw not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return raw

    return parse


def _unit_interval(raw):
    v = float(raw)
    if not 0.0 < v <= 1.0:
        raise ValueError("must lie in (0, 1]")
    return v


def _spinup(raw):
    if raw == "auto":
        return "auto"
    v = float(raw)
    if v < 0:
        raise ValueError('must be "auto" or a nonnegative time')
    return v


def _grid_n(raw):
    v = int(raw)
    if v < 16 or v % 2 != 0:
        raise ValueError("must be even and >= 16 for production runs")
    return v


@dataclass(frozen=True)
class RunConfig:
    grid_n: int = 32
    box_length: float = 2.0 * math.pi
    fluid_nu: float = 0.01
    model_cs: float = 0.1
    model_delta: float | None = None  # None resolves to box_length / 16
    model_variant: str = "gradient"
    force_family: str = "taylor_green"
    force_amplitude: float = 1.0  # 0 disables forcing
    force_mode: int = 1
    init_kind: str = "zero"
    init_seed: int = 0
    time_cfl_safety: float = 0.4
    time_dt_max: float = 0.05
    time_t_end: float = 10.0
    stats_spinup: object = "auto"
    stats_sample_interval: float = 0.1
    output_dir: str = "smagbox-out"
    output_snapshot_interval: float = 0.0

    @property
    def delta(self):
        if self.model_delta is None:
            return self.box_length / 16.0
        return self.model_delta


# key -> (attribute, parser, help)
SCHEMA = {
    "grid.n": ("grid_n", _grid_n, "grid points per axis (even, >= 16)"),
    "box.length": ("box_length", _positive(float), "periodic box edge length"),
    "fluid.nu": ("fluid_nu", _positive(float), "kinematic viscosity"),
    "model.cs": ("model_cs", _nonneg(float), "model constant (0 disables the eddy term)"),
    "model.delta": ("model_delta", _positive(float), "model length scale (default box.length/16)"),
    "model.variant": ("model_variant", _enum(VARIANTS), "gradient or deformation stress"),
    "force.family": ("force_family", _enum(FAMILIES), "body-force profile family"),
    "force.amplitude": ("force_amplitude", _nonneg(float), "force amplitude (0 = unforced)"),
    "force.mode": ("force_mode", _positive(int), "integer mode of the force profile"),
    "init.kind": ("init_kind", _enum(INIT_KINDS), "initial condition"),
    "init.seed": ("init_seed", int, "seed for the random initial condition"),
    "time.cfl_safety": ("time_cfl_safety", _unit_interval, "CFL safety factor in (0, 1]"),
    "time.dt_max": ("time_dt_max", _positive(float), "upper limit on the time step"),
    "time.t_end": ("time_t_end", _positive(float), "simulation end time"),
    "stats.spinup": ("stats_spinup", _spinup, 'averaging cutoff time, or "auto"'),
    "stats.sample_interval": ("stats_sample_interval", _positive(float),
                              "time between force-balance state samples"),
    "output.dir": ("output_dir", str, "output directory"),
    "output.snapshot_interval": ("output_snapshot_interval", _nonneg(float),
                                 "time between snapshots (0 = none)"),
}


def parse_value(key, raw):
    try:
        attr, parser, _ = SCHEMA[key]
    except KeyError:
        raise ConfigError(key, "unknown key") from None
    try:
        return attr, parser(str(raw).strip())
    except (ValueError, TypeError) as exc:
        raise ConfigError(key, f"bad value {raw!r} ({exc})") from None


def load_config_file(path):
    """Parse a key = value file into a {dotted key: raw string} mapping."""
    mapping = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{lineno}", f"expected 'key = value', got {text!r}")
            key, _, value = text.partition("=")
            mapping[key.strip()] = value.strip()
    return mapping


def build_config(*mappings):
    """Later mappings override earlier ones; values may be raw strings."""
    merged = {}
    for m in mappings:
        if m:
            merged.update(m)
    kwargs = {}
    for key, raw in merged.items():
        attr, value = parse_value(key, raw)
        kwargs[attr] = value
    return RunConfig(**kwargs)


def config_as_dict(cfg):
    """Dotted-key view of a config, with delta resolved to its number."""
    out = {}
    for key, (attr, _, _) in SCHEMA.items():
        value = getattr(cfg, attr)
        if key == "model.delta":
            value = cfg.delta
        out[key] = value
    return out


def config_from_dict(mapping):
    """Inverse of config_as_dict (values already typed or raw strings)."""
    return build_config({k: v for k, v in mapping.items()})


def with_updates(cfg, **attr_values):
    return replace(cfg, **attr_values)
