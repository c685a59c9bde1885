"""Relating the 3-mode reduced transformation to the full 6-mode gate.

A full basis state routes its V_A photon and its V-polarized A₁ photon into
the reduced device; H_A and the H-polarized A₁ modes bypass it, each picking
up a fixed spectator phase. A full amplitude therefore factorizes into a
reduced amplitude times the phases of the occupied spectator modes, and it
vanishes unless the spectator occupations of input and output agree.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np
from scipy.linalg import svdvals

from ..core.errors import DimensionError
from ..fock.states import ModeTransform
from .metrics import ContractionMap
from .targets import (
    ANCILLA_ROLES,
    CANONICAL_MODE_ORDER,
    REDUCED_MODE_ROLES,
    SPECTATOR_MODES,
    LogicalBasis,
    quad_rail_basis,
    reduced_basis,
)

dataclass_kwargs = {"slots": True}

SpectatorPhases = Mapping[str, complex]

# Active block order (V_A, V↻_A1, V↺_A1, anc1, anc2, anc3) in the canonical 9-mode order.
ACTIVE_BLOCK_ROLES = REDUCED_MODE_ROLES + ANCILLA_ROLES


def normalize_spectator_phases(phases: SpectatorPhases | None) -> dict[str, complex]:
    out = {mode: 1.0 + 0.0j for mode in SPECTATOR_MODES}
    for mode, value in (phases or {}).items():
        if mode not in out:
            raise KeyError(f"unknown spectator mode {mode!r}; expected one of {SPECTATOR_MODES}")
        out[mode] = complex(value)
    return out


@dataclass(frozen=True, eq=False, **dataclass_kwargs)
class ReducedLift:
    """full[J, I] = coefficients[J, I] · reduced[row_sector[J], col_sector[I]]."""

    full_basis: LogicalBasis
    reduced: LogicalBasis
    sector: np.ndarray
    coefficients: np.ndarray
    phase_modulus: float = 1.0  # largest |spectator phase|

    def full_photon_numbers(self, reduced_photons: np.ndarray) -> np.ndarray:
        """Photons per full column, given the photons per reduced column (ancillas included)."""
        extra = np.asarray(reduced_photons, dtype=float) - np.asarray(self.reduced.photon_numbers)
        return np.asarray(self.full_basis.photon_numbers, dtype=float) + extra[self.sector]

    def apply(self, reduced_matrix: np.ndarray) -> np.ndarray:
        return self.coefficients * reduced_matrix[np.ix_(self.sector, self.sector)]

    def pullback(self, full_gradient: np.ndarray) -> np.ndarray:
        """Carry a gradient with respect to the full map back to the reduced map."""
        d = self.reduced.dimension
        out = np.zeros((d, d), dtype=complex)
        rows = np.broadcast_to(self.sector[:, None], full_gradient.shape)
        cols = np.broadcast_to(self.sector[None, :], full_gradient.shape)
        np.add.at(out, (rows, cols), full_gradient * np.conj(self.coefficients))
        return out


def _sector_of(full: LogicalBasis, reduced: LogicalBasis, i: int) -> int:
    occupied = set(full.occupied_roles(i))
    active = tuple(role for role in REDUCED_MODE_ROLES if role in occupied)
    for r in range(reduced.dimension):
        if reduced.occupied_roles(r) == active:
            return r
    raise DimensionError(f"basis state {full.labels[i]} has no reduced sector")


def reduced_lift(spectator_phases: SpectatorPhases | None = None) -> ReducedLift:
    phases = normalize_spectator_phases(spectator_phases)
    full, red = quad_rail_basis(), reduced_basis()
    d = full.dimension
    sector = np.array([_sector_of(full, red, i) for i in range(d)], dtype=int)
    spectators = [
        tuple(role for role in full.occupied_roles(i) if role in phases) for i in range(d)
    ]
    coefficients = np.zeros((d, d), dtype=complex)
    for i in range(d):
        phase = np.prod([phases[m] for m in spectators[i]]) if spectators[i] else 1.0
        for j in range(d):
            if spectators[j] == spectators[i]:
                coefficients[j, i] = phase
    modulus = max(abs(p) for p in phases.values())
    return ReducedLift(full, red, sector, coefficients, phase_modulus=float(modulus))


def lift_reduced_to_full(
    reduced_map: ContractionMap, spectator_phases: SpectatorPhases | None = None
) -> ContractionMap:
    """8×8 map on the quad-rail basis induced by a map on the reduced basis.

    Every full column carries its spectator photons on top of the reduced
    ones, and those pass through the same rescaled transform, so the lifted
    map is rescaled by the full photon count and by the largest of the
    reduced σ and the spectator phase moduli.
    """
    if reduced_map.basis.labels != reduced_basis().labels:
        raise DimensionError(
            f"expected a map on the 6-state reduced basis, got {reduced_map.dimension} states"
        )
    lift = reduced_lift(spectator_phases)
    photons = None
    if reduced_map.photon_numbers is not None:
        photons = tuple(
            int(n) for n in lift.full_photon_numbers(np.asarray(reduced_map.photon_numbers))
        )
    sigma = reduced_map.sigma_max
    if sigma is not None:
        sigma = max(float(sigma), lift.phase_modulus)
    return ContractionMap(
        lift.full_basis,
        lift.apply(np.asarray(reduced_map.matrix)),
        sigma_max=sigma,
        photon_numbers=photons,
    )


def restrict_full_to_reduced(
    full_map: ContractionMap, spectator_phases: SpectatorPhases | None = None
) -> ContractionMap:
    """Inverse of the lift on maps that act trivially outside the active sector.

    Each reduced entry is read from the first full entry that routes to it
    with matching spectator occupations; entries no full pair reaches are 0.
    """
    if full_map.basis.labels != quad_rail_basis().labels:
        raise DimensionError(
            f"expected a map on the 8-state quad-rail basis, got {full_map.dimension} states"
        )
    lift = reduced_lift(spectator_phases)
    d = lift.reduced.dimension
    out = np.zeros((d, d), dtype=complex)
    seen = np.zeros((d, d), dtype=bool)
    photons: list[int] = [0] * d
    for i in range(lift.full_basis.dimension):
        ri = lift.sector[i]
        if full_map.photon_numbers is not None:
            spectators = lift.full_basis.photon_numbers[i] - lift.reduced.photon_numbers[ri]
            photons[ri] = int(full_map.photon_numbers[i]) - spectators
        for j in range(lift.full_basis.dimension):
            rj = lift.sector[j]
            c = lift.coefficients[j, i]
            if c == 0 or seen[rj, ri]:
                continue
            out[rj, ri] = full_map.matrix[j, i] / c
            seen[rj, ri] = True
    return ContractionMap(
        lift.reduced,
        out,
        sigma_max=full_map.sigma_max,
        photon_numbers=tuple(photons) if full_map.photon_numbers is not None else None,
    )


def embed_reduced_block(
    block: ModeTransform | np.ndarray,
    spectator_phases: SpectatorPhases | None = None,
    normalize: bool = True,
) -> ModeTransform:
    """9-mode transform in the canonical order from a 6×6 active block.

    The block's rows and columns are ordered (V_A, V↻_A1, V↺_A1, anc1, anc2,
    anc3). With ``normalize`` the whole 9-mode transform, spectator phases
    included, is scaled to unit largest singular value, which is the scale
    the rescaled lift assumes.
    """
    arr = block.matrix if isinstance(block, ModeTransform) else np.asarray(block, dtype=complex)
    if arr.shape != (6, 6):
        raise DimensionError(f"active block must be 6x6, got {arr.shape}")
    phases = normalize_spectator_phases(spectator_phases)
    idx = [CANONICAL_MODE_ORDER.index(role) for role in ACTIVE_BLOCK_ROLES]
    full = np.zeros((9, 9), dtype=complex)
    full[np.ix_(idx, idx)] = arr
    for mode, phase in phases.items():
        k = CANONICAL_MODE_ORDER.index(mode)
        full[k, k] = phase
    if normalize:
        sigma = max(float(svdvals(arr)[0]), max(abs(p) for p in phases.values()))
        if sigma > 0:
            full = full / sigma
    return ModeTransform(full)


def active_block(t: ModeTransform | np.ndarray) -> ModeTransform:
    """Inverse of embed_reduced_block (without normalization)."""
    arr = t.matrix if isinstance(t, ModeTransform) else np.asarray(t, dtype=complex)
    if arr.shape != (9, 9):
        raise DimensionError(f"expected a 9x9 transform, got {arr.shape}")
    idx = [CANONICAL_MODE_ORDER.index(role) for role in ACTIVE_BLOCK_ROLES]
    return ModeTransform(arr[np.ix_(idx, idx)])
