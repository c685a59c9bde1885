"""Multi-photon Fock-state simulation under linear-optical mode transforms."""

from .permanent import (
    permanent,
    permanent_gradient,
    permanent_gradients,
    permanent_naive,
    permanents,
)
from .simulator import apply_transform, postselect, transition_amplitude, transition_gradient
from .states import FockBasisState, ModeTransform, PhotonicState, enumerate_basis

__all__ = [
    "FockBasisState",
    "ModeTransform",
    "PhotonicState",
    "apply_transform",
    "enumerate_basis",
    "permanent",
    "permanent_gradient",
    "permanent_gradients",
    "permanent_naive",
    "permanents",
    "postselect",
    "transition_amplitude",
    "transition_gradient",
]
