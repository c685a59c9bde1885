"""Triangular beamsplitter-mesh factorization of unitaries.

Convention: a beamsplitter on modes (p, q) with mixing angle θ and phase φ
acts as

    [[cos θ, −e^{−iφ}·sin θ],
     [e^{iφ}·sin θ,  cos θ]]

on those two modes. A netlist applies its N − 1 phase shifters (modes
0..N−2) first, then its N(N−1)/2 beamsplitters between neighbouring modes in
list order, and finally multiplies by ``exp(i·global_phase)``.

The decomposition nulls the sub-diagonal of u column by column, bottom row
first, always mixing rows (q − 1, q); what remains is a diagonal of phases.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..core.enums import ElementKind
from ..core.errors import DimensionError, NotUnitaryError
from ..core.logging_config import get_logger
from ..fock.simulator import TransformLike, as_matrix
from ..fock.states import ModeTransform

logger = get_logger(__name__)

dataclass_kwargs = {"slots": True}

UNITARY_TOLERANCE = 1e-9


def beamsplitter_matrix(theta: float, phi: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [[c, -cmath.exp(-1j * phi) * s], [cmath.exp(1j * phi) * s, c]], dtype=complex
    )


@dataclass(frozen=True, **dataclass_kwargs)
class InterferometerElement:
    """A beamsplitter (two modes, θ and φ) or a phase shifter (one mode, φ)."""

    kind: ElementKind
    modes: tuple[int, ...]
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ElementKind(self.kind))
        object.__setattr__(self, "modes", tuple(int(m) for m in self.modes))
        if any(m < 0 for m in self.modes):
            raise DimensionError(f"negative mode index in {self.modes}")
        if self.kind is ElementKind.BEAMSPLITTER:
            if len(self.modes) != 2 or self.modes[0] == self.modes[1]:
                raise DimensionError(
                    f"a beamsplitter needs two distinct modes, got {self.modes}"
                )
        elif len(self.modes) != 1:
            raise DimensionError(f"a phase shifter acts on one mode, got {self.modes}")
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("element angles must be finite")

    @classmethod
    def beamsplitter(cls, p: int, q: int, theta: float, phi: float) -> InterferometerElement:
        return cls(ElementKind.BEAMSPLITTER, (p, q), theta, phi)

    @classmethod
    def phase_shifter(cls, mode: int, phi: float) -> InterferometerElement:
        return cls(ElementKind.PHASE_SHIFTER, (mode,), 0.0, phi)

    def block(self) -> np.ndarray:
        if self.kind is ElementKind.BEAMSPLITTER:
            return beamsplitter_matrix(self.theta, self.phi)
        return np.array([[cmath.exp(1j * self.phi)]], dtype=complex)

    def as_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "modes": list(self.modes),
            "theta": self.theta,
            "phi": self.phi,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> InterferometerElement:
        return cls(
            ElementKind(data["kind"]),
            tuple(data["modes"]),
            float(data.get("theta", 0.0)),
            float(data.get("phi", 0.0)),
        )


@dataclass(**dataclass_kwargs)
class Netlist:
    mode_count: int
    elements: list[InterferometerElement] = field(default_factory=list)
    global_phase: float = 0.0

    @property
    def beamsplitter_count(self) -> int:
        return sum(1 for e in self.elements if e.kind is ElementKind.BEAMSPLITTER)

    @property
    def phase_shifter_count(self) -> int:
        return sum(1 for e in self.elements if e.kind is ElementKind.PHASE_SHIFTER)

    def as_dict(self) -> dict[str, Any]:
        return {
            "mode_count": self.mode_count,
            "global_phase": self.global_phase,
            "beamsplitters": self.beamsplitter_count,
            "elements": [e.as_dict() for e in self.elements],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Netlist:
        return cls(
            int(data["mode_count"]),
            [InterferometerElement.from_dict(e) for e in data.get("elements", [])],
            float(data.get("global_phase", 0.0)),
        )


def _nulling_angles(a: complex, b: complex) -> tuple[float, float]:
    """(θ, φ) such that the inverse beamsplitter zeroes b against a."""
    theta = math.atan2(abs(b), abs(a))
    if abs(b) == 0.0:
        return 0.0, 0.0
    phi = cmath.phase(b) - (cmath.phase(a) if abs(a) > 0.0 else 0.0)
    return theta, phi


def reck_decompose(u: TransformLike) -> Netlist:
    w = np.array(as_matrix(u), dtype=complex, copy=True)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {w.shape}")
    n = w.shape[0]
    err = float(np.max(np.abs(w.conj().T @ w - np.eye(n)))) if n else 0.0
    if err >= UNITARY_TOLERANCE:
        raise NotUnitaryError(f"matrix is not unitary (max |u†u − I| = {err:.3g})")

    nulling: list[InterferometerElement] = []
    for j in range(n - 1):
        for q in range(n - 1, j, -1):
            p = q - 1
            theta, phi = _nulling_angles(w[p, j], w[q, j])
            inverse = beamsplitter_matrix(theta, phi).conj().T
            w[[p, q], :] = inverse @ w[[p, q], :]
            w[q, j] = 0.0
            nulling.append(InterferometerElement.beamsplitter(p, q, theta, phi))

    diag = np.diag(w) if n else np.zeros(0, dtype=complex)
    global_phase = float(cmath.phase(diag[-1])) if n else 0.0
    elements = [
        InterferometerElement.phase_shifter(k, cmath.phase(diag[k]) - global_phase)
        for k in range(n - 1)
    ]
    elements.extend(reversed(nulling))
    netlist = Netlist(n, elements, global_phase)
    logger.debug(
        "Decomposed unitary",
        extra={"modes": n, "beamsplitters": netlist.beamsplitter_count},
    )
    return netlist


def recompose(netlist: Netlist) -> ModeTransform:
    n = netlist.mode_count
    out = np.eye(n, dtype=complex)
    for element in netlist.elements:
        if max(element.modes) >= n:
            raise DimensionError(
                f"element on modes {element.modes} exceeds {n}-mode netlist"
            )
        idx = list(element.modes)
        out[idx, :] = element.block() @ out[idx, :]
    return ModeTransform(cmath.exp(1j * netlist.global_phase) * out)
