from __future__ import annotations

from enum import Enum


class SearchSpace(str, Enum):
    REDUCED = "reduced"
    FULL = "full"


class ErrorKind(str, Enum):
    I = "I"  # noqa: E741
    XA = "XA"
    XA1 = "XA1"
    XAXA1 = "XAXA1"


class Syndrome(str, Enum):
    PHI_PLUS = "Phi+"
    PHI_MINUS = "Phi-"
    PSI_PLUS = "Psi+"
    PSI_MINUS = "Psi-"

    @property
    def symbol(self) -> str:
        return {"Phi+": "Φ⁺", "Phi-": "Φ⁻", "Psi+": "Ψ⁺", "Psi-": "Ψ⁻"}[self.value]


class SpoamState(str, Enum):
    """Single-photon polarization-OAM analysis outcomes."""

    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


class Recovery(str, Enum):
    I = "I"  # noqa: E741
    X = "X"
    Z = "Z"
    ZX = "ZX"


class ElementKind(str, Enum):
    BEAMSPLITTER = "beamsplitter"
    PHASE_SHIFTER = "phase_shifter"


class OutputFormat(str, Enum):
    JSON = "json"
    MD = "md"
