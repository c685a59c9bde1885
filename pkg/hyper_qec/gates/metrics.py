from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.linalg import svdvals

from ..core.errors import DimensionError
from ..fock.simulator import TransformLike, as_matrix, transition_amplitude
from ..fock.states import FockBasisState
from .targets import LogicalBasis, TargetGate

dataclass_kwargs = {"slots": True}

# Two independent 2/27 gates, one per OAM value.
KNILL_COMBINATION_PROBABILITY = (2 / 27) ** 2
REFERENCE_SUCCESS_PROBABILITY = 0.00974276


@dataclass(frozen=True, **dataclass_kwargs)
class MeasurementScheme:
    """Ancilla photons injected at the input and the heralding detection pattern."""

    ancilla_modes: tuple[int, ...]
    ancilla_input: tuple[int, ...]
    herald_pattern: tuple[int, ...]

    def __post_init__(self) -> None:
        modes = tuple(int(m) for m in self.ancilla_modes)
        inp = tuple(int(n) for n in self.ancilla_input)
        out = tuple(int(n) for n in self.herald_pattern)
        if not (len(modes) == len(inp) == len(out)):
            raise DimensionError(
                "ancilla_modes, ancilla_input and herald_pattern must have equal length"
            )
        if len(set(modes)) != len(modes) or any(m < 0 for m in modes):
            raise DimensionError(f"invalid ancilla modes {modes}")
        if any(n < 0 for n in inp + out):
            raise ValueError("ancilla occupations must be non-negative")
        object.__setattr__(self, "ancilla_modes", modes)
        object.__setattr__(self, "ancilla_input", inp)
        object.__setattr__(self, "herald_pattern", out)

    @classmethod
    def default(cls, mode_count: int, ancillas: int = 3) -> MeasurementScheme:
        """One photon in each of the last ``ancillas`` modes, heralded on one each."""
        modes = tuple(range(mode_count - ancillas, mode_count))
        ones = (1,) * ancillas
        return cls(modes, ones, ones)

    @classmethod
    def with_patterns(
        cls, mode_count: int, ancilla_input: Sequence[int], herald_pattern: Sequence[int]
    ) -> MeasurementScheme:
        k = len(ancilla_input)
        return cls(tuple(range(mode_count - k, mode_count)), tuple(ancilla_input), tuple(herald_pattern))

    @property
    def ancilla_photons(self) -> int:
        return sum(self.ancilla_input)

    def computational_modes(self, mode_count: int) -> tuple[int, ...]:
        if any(m >= mode_count for m in self.ancilla_modes):
            raise DimensionError(
                f"ancilla modes {self.ancilla_modes} exceed {mode_count} modes"
            )
        anc = set(self.ancilla_modes)
        return tuple(m for m in range(mode_count) if m not in anc)

    def place(
        self, logical: FockBasisState, mode_count: int, ancilla: Sequence[int]
    ) -> FockBasisState:
        """Full occupation vector with ``logical`` on the computational modes."""
        comp = self.computational_modes(mode_count)
        if logical.mode_count != len(comp):
            raise DimensionError(
                f"logical state covers {logical.mode_count} modes, "
                f"scheme leaves {len(comp)} computational modes"
            )
        occ = [0] * mode_count
        for mode, n in zip(comp, logical.occupations, strict=True):
            occ[mode] = n
        for mode, n in zip(self.ancilla_modes, ancilla, strict=True):
            occ[mode] = n
        return FockBasisState(tuple(occ))

    def as_dict(self) -> dict[str, Any]:
        return {
            "ancilla_modes": list(self.ancilla_modes),
            "ancilla_input": list(self.ancilla_input),
            "herald_pattern": list(self.herald_pattern),
        }


@dataclass(frozen=True, eq=False, **dataclass_kwargs)
class ContractionMap:
    """Heralded (Kraus) operator on the logical subspace.

    ``sigma_max`` is the largest singular value of the parent transform and
    ``photon_numbers`` the total photon number of each input column; both are
    None for maps built by hand, which are then scored as given.
    """

    basis: LogicalBasis
    matrix: np.ndarray
    sigma_max: float | None = None
    photon_numbers: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        arr = np.array(self.matrix, dtype=complex, copy=True)
        d = self.basis.dimension
        if arr.shape != (d, d):
            raise DimensionError(f"contraction map must be {d}x{d}, got {arr.shape}")
        if self.photon_numbers is not None and len(self.photon_numbers) != d:
            raise DimensionError("photon_numbers needs one entry per basis state")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    def rescaled(self) -> np.ndarray:
        """Map of the parent transform rescaled to unit largest singular value."""
        if self.sigma_max is None or self.photon_numbers is None:
            return np.asarray(self.matrix)
        factors = float(self.sigma_max) ** -np.asarray(self.photon_numbers, dtype=float)
        return self.matrix * factors[None, :]

    def scaled(self, c: complex) -> ContractionMap:
        return ContractionMap(self.basis, c * self.matrix, self.sigma_max, self.photon_numbers)


@dataclass(frozen=True, **dataclass_kwargs)
class GateMetrics:
    fidelity: float
    success_probability: float

    def as_dict(self) -> dict[str, float]:
        return {"fidelity": self.fidelity, "success_probability": self.success_probability}


def score(a: np.ndarray, omega: np.ndarray) -> GateMetrics:
    """Process fidelity and success probability of an already rescaled map."""
    d = omega.shape[0]
    s = float(np.real(np.vdot(a, a)))
    if s <= 0.0:
        return GateMetrics(0.0, 0.0)
    overlap = np.vdot(omega, a)  # tr(Ω†A)
    fidelity = min(1.0, float(abs(overlap) ** 2 / (d * s)))
    return GateMetrics(fidelity, s / d)


def contraction_map(
    t: TransformLike, basis: LogicalBasis, scheme: MeasurementScheme | None = None
) -> ContractionMap:
    """A[j, i] = ⟨basis_j ⊕ herald| U(t) |basis_i ⊕ ancilla_input⟩.

    Outputs outside the logical basis are leakage and do not appear in A.
    """
    mat = as_matrix(t)
    m = mat.shape[0]
    scheme = scheme or MeasurementScheme.default(m)
    inputs = [scheme.place(s, m, scheme.ancilla_input) for s in basis.states]
    outputs = [scheme.place(s, m, scheme.herald_pattern) for s in basis.states]
    d = basis.dimension
    a = np.zeros((d, d), dtype=complex)
    for i, inp in enumerate(inputs):
        for j, out in enumerate(outputs):
            a[j, i] = transition_amplitude(mat, inp, out)
    sigma = float(svdvals(mat)[0]) if m else None
    return ContractionMap(
        basis,
        a,
        sigma_max=sigma,
        photon_numbers=tuple(s.photon_count for s in inputs),
    )


def metrics(a: ContractionMap, target: TargetGate) -> GateMetrics:
    """F = |tr(Ω†Ã)|² / (d·tr(ÆÃ)) and P = tr(ÆÃ)/d on the rescaled map Ã.

    A zero map scores F = 0 and P = 0.
    """
    if a.basis.labels != target.basis.labels:
        raise DimensionError(
            f"map basis ({a.dimension} states) does not match the target basis "
            f"({target.dimension} states)"
        )
    return score(a.rescaled(), target.matrix)
