"""Reproducible experiment workflows driven by the CLI."""

from .base import BaseExperiment, ExperimentResult, RunReport
from .workflows import (
    CodeExperiment,
    CompileExperiment,
    OptimizeExperiment,
    SuperdenseExperiment,
    VerifyAppendixExperiment,
)

__all__ = [
    "BaseExperiment",
    "CodeExperiment",
    "CompileExperiment",
    "ExperimentResult",
    "OptimizeExperiment",
    "RunReport",
    "SuperdenseExperiment",
    "VerifyAppendixExperiment",
]
