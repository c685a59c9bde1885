"""Target gates, heralded contraction maps and their scores."""

from .metrics import (
    KNILL_COMBINATION_PROBABILITY,
    REFERENCE_SUCCESS_PROBABILITY,
    ContractionMap,
    GateMetrics,
    MeasurementScheme,
    contraction_map,
    metrics,
)
from .reduction import (
    embed_reduced_block,
    lift_reduced_to_full,
    restrict_full_to_reduced,
)
from .targets import (
    LogicalBasis,
    TargetGate,
    dual_rail_basis,
    quad_rail_basis,
    reduced_basis,
    reduced_csign,
    target_csign,
)

__all__ = [
    "KNILL_COMBINATION_PROBABILITY",
    "REFERENCE_SUCCESS_PROBABILITY",
    "ContractionMap",
    "GateMetrics",
    "LogicalBasis",
    "MeasurementScheme",
    "TargetGate",
    "contraction_map",
    "dual_rail_basis",
    "embed_reduced_block",
    "lift_reduced_to_full",
    "metrics",
    "quad_rail_basis",
    "reduced_basis",
    "reduced_csign",
    "restrict_full_to_reduced",
    "target_csign",
]
