"""Numerical search for heralded linear-optical gates."""

from .problem import Evaluation, GateProblem, gradient, objective_fidelity
from .search import (
    CycleOutcome,
    OptimizationConfig,
    OptimizationResult,
    StageOutcome,
    count_plateaus,
    load_config,
    random_start,
    run_cycle,
    run_cycles,
    stage1_fidelity_ascent,
    stage2_probability_ascent,
)

__all__ = [
    "CycleOutcome",
    "Evaluation",
    "GateProblem",
    "OptimizationConfig",
    "OptimizationResult",
    "StageOutcome",
    "count_plateaus",
    "gradient",
    "load_config",
    "objective_fidelity",
    "random_start",
    "run_cycle",
    "run_cycles",
    "stage1_fidelity_ascent",
    "stage2_probability_ascent",
]
