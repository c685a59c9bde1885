"""Dilation of contractions into unitaries and beamsplitter-mesh compilation."""

from .dilation import (
    COMPILE_UNIT_TOLERANCE,
    UNIT_TOLERANCE,
    dilate,
    rescale_to_contraction,
    singular_values,
)
from .reck import InterferometerElement, Netlist, beamsplitter_matrix, recompose, reck_decompose

__all__ = [
    "COMPILE_UNIT_TOLERANCE",
    "UNIT_TOLERANCE",
    "InterferometerElement",
    "Netlist",
    "beamsplitter_matrix",
    "dilate",
    "recompose",
    "reck_decompose",
    "rescale_to_contraction",
    "singular_values",
]
