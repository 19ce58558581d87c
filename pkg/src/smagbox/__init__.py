"""Pseudo-spectral eddy-viscosity solver on a periodic box.

The package simulates a body-forced incompressible flow with a
nonlinear eddy-viscosity closure, records its dissipation statistics,
and checks measured long-time averages against closed-form bounds.
"""

__version__ = "0.1.0"

from .grid import Grid
from .fields import ScalarField, TensorField, VectorField
from .model import ModelParams
from .forcing import ForceSpec, force_scales, make_force
from .integrator import SimState, cfl_dt, initial_state, rhs_explicit, step
from .statistics import DissipationRecord, TimeAverage, record, time_average
from .bounds import BoundReport, check_bound, optimal_alpha, theorem1_rhs, theorem2_rhs
from .config import RunConfig
from .driver import resume_simulation, run_simulation

__all__ = [
    "__version__",
    "Grid",
    "ScalarField",
    "VectorField",
    "TensorField",
    "ModelParams",
    "ForceSpec",
    "make_force",
    "force_scales",
    "SimState",
    "initial_state",
    "rhs_explicit",
    "step",
    "cfl_dt",
    "DissipationRecord",
    "TimeAverage",
    "record",
    "time_average",
    "BoundReport",
    "theorem1_rhs",
    "theorem2_rhs",
    "optimal_alpha",
    "check_bound",
    "RunConfig",
    "run_simulation",
    "resume_simulation",
]
