"""Stochastic quantum-jump trajectories for the dissipative Landau-Zener
two-level system, with a direct master-equation integrator for validation."""

from .config import SimConfig, load, parse, serialize
from .dissipation import TypeIParams, TypeIIParams
from .engine import JumpEvent, StepControl, TrajectoryRecord, run_ensemble, run_trajectory
from .errors import ConfigError, LztrajError, OracleError, TrajectoryError, ValidationError
from .lzmodel import LzParams
from .oracle import ensemble_density, integrate_master, integrate_schrodinger
from .stats import count_histogram, interval_histogram, merge_partials, summarize

__all__ = [
    "ConfigError",
    "JumpEvent",
    "LzParams",
    "LztrajError",
    "OracleError",
    "SimConfig",
    "StepControl",
    "TrajectoryError",
    "TrajectoryRecord",
    "TypeIIParams",
    "TypeIParams",
    "ValidationError",
    "count_histogram",
    "ensemble_density",
    "integrate_master",
    "integrate_schrodinger",
    "interval_histogram",
    "load",
    "merge_partials",
    "parse",
    "run_ensemble",
    "run_trajectory",
    "serialize",
    "summarize",
]

__version__ = "0.1.0"
