"""Logical bases and target gates for the encoding circuit.

Gates are defined on mode occupations of a direct sum of modes, never as a
tensor product of polarization and OAM factors.

Mode roles, in the fixed order used for 9-mode evaluation:

    H_A, V_A, H↺_A1, H↻_A1, V↺_A1, V↻_A1, anc1, anc2, anc3
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from ..core.errors import DimensionError, NotUnitaryError
from ..fock.states import FockBasisState

dataclass_kwargs = {"slots": True}

PHOTON_A_MODES = ("H_A", "V_A")
A1_MODES = ("H↺_A1", "H↻_A1", "V↺_A1", "V↻_A1")
MODE_ROLES = PHOTON_A_MODES + A1_MODES
ANCILLA_ROLES = ("anc1", "anc2", "anc3")
CANONICAL_MODE_ORDER = MODE_ROLES + ANCILLA_ROLES

# Modes the reduced transformation acts on, and the ones that bypass it.
REDUCED_MODE_ROLES = ("V_A", "V↻_A1", "V↺_A1")
SPECTATOR_MODES = ("H_A", "H↺_A1", "H↻_A1")

UNITARY_TOLERANCE = 1e-12


@dataclass(frozen=True, **dataclass_kwargs)
class LogicalBasis:
    labels: tuple[str, ...]
    states: tuple[FockBasisState, ...]
    mode_roles: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.states):
            raise DimensionError("every basis label needs exactly one Fock state")
        if len(set(self.states)) != len(self.states):
            raise ValueError("basis Fock states must be distinct")
        for state in self.states:
            if state.mode_count != len(self.mode_roles):
                raise DimensionError(
                    f"basis state {state} does not cover modes {self.mode_roles}"
                )

    @property
    def dimension(self) -> int:
        return len(self.labels)

    @property
    def fock_map(self) -> dict[str, FockBasisState]:
        return dict(zip(self.labels, self.states, strict=True))

    @property
    def photon_numbers(self) -> tuple[int, ...]:
        return tuple(s.photon_count for s in self.states)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def occupied_roles(self, i: int) -> tuple[str, ...]:
        occ = self.states[i].occupations
        return tuple(role for role, n in zip(self.mode_roles, occ, strict=True) if n)


@dataclass(frozen=True, eq=False, **dataclass_kwargs)
class TargetGate:
    basis: LogicalBasis
    matrix: np.ndarray
    name: str = "custom"

    def __post_init__(self) -> None:
        arr = np.array(self.matrix, dtype=complex, copy=True)
        d = self.basis.dimension
        if arr.shape != (d, d):
            raise DimensionError(f"target must be {d}x{d}, got {arr.shape}")
        if np.max(np.abs(arr.conj().T @ arr - np.eye(d))) >= UNITARY_TOLERANCE:
            raise NotUnitaryError(f"target gate '{self.name}' is not unitary")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    def entry(self, label: str) -> complex:
        i = self.basis.index(label)
        return complex(self.matrix[i, i])


def _occupations(roles: Sequence[str], occupied: Sequence[str]) -> FockBasisState:
    return FockBasisState(tuple(1 if r in occupied else 0 for r in roles))


def quad_rail_basis() -> LogicalBasis:
    """{H,V}_A × {H↺, H↻, V↺, V↻}_A1 over the six computational modes.

    Order: the six states left invariant by the encoding gate, then
    V_A⊗V↺_A1 and V_A⊗V↻_A1.
    """
    labels: list[str] = []
    states: list[FockBasisState] = []
    for pa in PHOTON_A_MODES:
        for a1 in A1_MODES:
            labels.append(f"{pa}⊗{a1}")
            states.append(_occupations(MODE_ROLES, (pa, a1)))
    return LogicalBasis(tuple(labels), tuple(states), MODE_ROLES)


def dual_rail_basis() -> LogicalBasis:
    """Polarization qubit of photon A over modes (H_A, V_A)."""
    states = tuple(_occupations(PHOTON_A_MODES, (m,)) for m in PHOTON_A_MODES)
    return LogicalBasis(PHOTON_A_MODES, states, PHOTON_A_MODES)


def reduced_basis() -> LogicalBasis:
    """Occupations of (V_A, V↻_A1, V↺_A1) reachable from the quad-rail basis.

    n₁ ∈ {0, 1} photons in V_A times at most one photon among the two
    V-polarized A₁ modes: 6 states, vacuum-first within each n₁.
    """
    labels: list[str] = []
    states: list[FockBasisState] = []
    for n1 in (0, 1):
        for a1 in (None, "V↻_A1", "V↺_A1"):
            occupied = (("V_A",) if n1 else ()) + ((a1,) if a1 else ())
            labels.append("⊗".join(occupied) if occupied else "∅")
            states.append(_occupations(REDUCED_MODE_ROLES, occupied))
    return LogicalBasis(tuple(labels), tuple(states), REDUCED_MODE_ROLES)


def _sign_target(basis: LogicalBasis, flipped: Mapping[int, bool], name: str) -> TargetGate:
    diag = np.array([-1.0 if flipped.get(i) else 1.0 for i in range(basis.dimension)])
    return TargetGate(basis, np.diag(diag).astype(complex), name=name)


def target_csign() -> TargetGate:
    """8×8 controlled-sign: −1 on V_A⊗V↺_A1 and V_A⊗V↻_A1, +1 elsewhere."""
    basis = quad_rail_basis()
    flipped = {basis.index("V_A⊗V↺_A1"): True, basis.index("V_A⊗V↻_A1"): True}
    return _sign_target(basis, flipped, "csign")


def reduced_csign() -> TargetGate:
    """Sign flip exactly when V_A and one V-polarized A₁ mode are both occupied."""
    basis = reduced_basis()
    flipped = {}
    for i, state in enumerate(basis.states):
        n1, n_cw, n_ccw = state.occupations
        flipped[i] = bool(n1 and (n_cw or n_ccw))
    return _sign_target(basis, flipped, "reduced_csign")
