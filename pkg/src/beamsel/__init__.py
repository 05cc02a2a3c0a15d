"""Beam selection for beamspace multi-user MIMO downlinks.

Channel synthesis, zero-forcing rate evaluation and four selection
schemes (per-user magnitude, interference-aware reassignment, exhaustive
enumeration, ant colony search) plus a Monte Carlo harness with CSV
output. Hot kernels are numba-compiled with a pure numpy fallback,
switchable via the BEAMSEL_BACKEND environment variable.
"""

from .aco import AcoParams, AcoState, run_colony, select_aco
from .channel import (BeamspaceChannel, PathAngles, PathGains,
                      ScenarioConfig, dla_transform, generate_channel,
                      grid_directions, spatial_direction, steering_vector)
from .exceptions import (BeamselError, BudgetExceededError, ConfigError,
                         EmptyCellError, SingularMatrixError)
from .harness import (AggregateCell, ExperimentSpec, TrialResult, aggregate,
                      derive_seed, figure_preset, run_experiment,
                      trial_channel, write_csv)
from .kernels import BACKEND
from .precoding import (DEFAULT_RIDGE, RateReport, evaluate_beams, sum_rate,
                        trace_objective, zf_precoder, zf_scaling)
from .selectors import (SelectionOutcome, exhaustive_beams, ia_beams,
                        interference_users, mm1_beams, select_exhaustive,
                        select_ia, select_mm1)
from .validate import run_invariant_suite

__version__ = "0.1.0"

__all__ = [
    "AcoParams", "AcoState", "run_colony", "select_aco",
    "BeamspaceChannel", "PathAngles", "PathGains", "ScenarioConfig",
    "dla_transform", "generate_channel", "grid_directions",
    "spatial_direction", "steering_vector",
    "BeamselError", "BudgetExceededError", "ConfigError", "EmptyCellError",
    "SingularMatrixError",
    "AggregateCell", "ExperimentSpec", "TrialResult", "aggregate",
    "derive_seed", "figure_preset", "run_experiment", "trial_channel",
    "write_csv",
    "BACKEND",
    "DEFAULT_RIDGE", "RateReport", "evaluate_beams", "sum_rate",
    "trace_objective", "zf_precoder", "zf_scaling",
    "SelectionOutcome", "exhaustive_beams", "ia_beams",
    "interference_users", "mm1_beams", "select_exhaustive", "select_ia",
    "select_mm1",
    "run_invariant_suite",
    "__version__",
]
