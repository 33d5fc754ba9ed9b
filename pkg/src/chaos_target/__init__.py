"""Directing chaotic orbits to a target with teaching-learning-based optimization."""
from .maps import (
    ChaoticMap,
    MapKind,
    MapOverflowError,
    NoFixedPointError,
    NotReachedError,
    State2,
    henon_fixed_point,
    henon_step,
    iterate_uncontrolled,
    ushio_step,
)
from .problem import (
    EvaluationError,
    TargetingProblem,
    clamp_to_bounds,
    controlled_trajectory,
    evaluate,
    evaluate_batch,
    henon_problem,
    is_success,
    ushio_problem,
)
from .tlbo import RunRecord, TlboConfig, optimize
from .harness import BatchStats, SuccessMetrics, mean_curve, run_batch, sweep, uncontrolled_baseline

__version__ = "0.1.0"
