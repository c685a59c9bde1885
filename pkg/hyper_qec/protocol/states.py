"""Logical state vectors for polarization and OAM.

A photon carrying both degrees of freedom lives in a 4-dimensional space
with basis order (H↺, H↻, V↺, V↻), index = 2·pol + oam. The information
photon only carries polarization, (H, V).
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..core.enums import SpoamState, Syndrome
from ..core.errors import DimensionError, NormalizationError

dataclass_kwargs = {"slots": True}

NORM_TOLERANCE = 1e-12
SUPPORT_TOLERANCE = 1e-12

POLARIZATION_X = np.array([[0, 1], [1, 0]], dtype=complex)
POLARIZATION_Z = np.diag([1, -1]).astype(complex)
IDENTITY_2 = np.eye(2, dtype=complex)

# Polarization operators on a (pol ⊗ oam) photon; OAM is left alone.
HYPER_X = np.kron(POLARIZATION_X, IDENTITY_2)
HYPER_Z = np.kron(POLARIZATION_Z, IDENTITY_2)

CODE_DIMS = (2, 4, 4)
PAIR_DIMS = (4, 4)

_INV_SQRT2 = 1 / math.sqrt(2)


@dataclass(frozen=True, eq=False, **dataclass_kwargs)
class HyperState:
    """Normalized amplitudes over a product of subsystems of sizes ``dims``."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        arr = np.array(self.amplitudes, dtype=complex, copy=True)
        if arr.size != math.prod(dims):
            raise DimensionError(f"{arr.size} amplitudes do not fit subsystems {dims}")
        arr = arr.reshape(dims)
        norm = float(np.real(np.vdot(arr, arr)))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise NormalizationError(f"state has squared norm {norm:.15g}, expected 1")
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def normalized(cls, amplitudes: np.ndarray, dims: Sequence[int]) -> HyperState:
        arr = np.asarray(amplitudes, dtype=complex)
        norm = math.sqrt(float(np.real(np.vdot(arr, arr))))
        if norm == 0.0:
            raise NormalizationError("cannot normalize the zero vector")
        return cls(arr / norm, tuple(dims))

    @classmethod
    def product(cls, *states: HyperState) -> HyperState:
        vec = np.ones(1, dtype=complex)
        dims: tuple[int, ...] = ()
        for s in states:
            vec = np.kron(vec, s.vector)
            dims += s.dims
        return cls(vec, dims)

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def apply(self, op: np.ndarray, axes: Sequence[int]) -> HyperState:
        """Apply ``op`` to the subsystems ``axes`` (in that order)."""
        axes = tuple(axes)
        sub = math.prod(self.dims[a] for a in axes)
        op = np.asarray(op, dtype=complex)
        if op.shape != (sub, sub):
            raise DimensionError(f"operator of shape {op.shape} does not act on axes {axes}")
        rest = [a for a in range(len(self.dims)) if a not in axes]
        moved = np.transpose(self.amplitudes, axes + tuple(rest)).reshape(sub, -1)
        out = (op @ moved).reshape([self.dims[a] for a in axes] + [self.dims[a] for a in rest])
        return HyperState(np.transpose(out, np.argsort(axes + tuple(rest))), self.dims)

    def overlap(self, other: HyperState) -> complex:
        if other.dims != self.dims:
            raise DimensionError(f"subsystems {self.dims} and {other.dims} differ")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def polarization_qubit(alpha: complex, beta: complex) -> HyperState:
    """|ψ⟩ = α|H⟩ + β|V⟩; rejects unnormalized (α, β)."""
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise NormalizationError(f"|alpha|^2 + |beta|^2 = {norm:.15g}, expected 1")
    return HyperState(np.array([alpha, beta], dtype=complex), (2,))


def _hyper_index(pol: int, oam: int) -> int:
    return 2 * pol + oam


def hyper_bell_states() -> dict[Syndrome, HyperState]:
    """Φ±, Ψ± on two photons: a polarization Bell pair times (|↺↻⟩ + |↻↺⟩)/√2."""
    pol_pairs = {
        Syndrome.PHI_PLUS: {(0, 0): 1, (1, 1): 1},
        Syndrome.PHI_MINUS: {(0, 0): 1, (1, 1): -1},
        Syndrome.PSI_PLUS: {(0, 1): 1, (1, 0): 1},
        Syndrome.PSI_MINUS: {(0, 1): 1, (1, 0): -1},
    }
    out: dict[Syndrome, HyperState] = {}
    for label, terms in pol_pairs.items():
        amp = np.zeros(PAIR_DIMS, dtype=complex)
        for (pa, pb), sign in terms.items():
            for oa, ob in ((0, 1), (1, 0)):
                amp[_hyper_index(pa, oa), _hyper_index(pb, ob)] = sign / 2
        out[label] = HyperState(amp, PAIR_DIMS)
    return out


def spoam_basis() -> dict[SpoamState, np.ndarray]:
    """φ± = (|H↺⟩ ± |V↻⟩)/√2 and ψ± = (|H↻⟩ ± |V↺⟩)/√2."""
    h_ccw, h_cw, v_ccw, v_cw = np.eye(4, dtype=complex)
    return {
        SpoamState.PHI_PLUS: (h_ccw + v_cw) * _INV_SQRT2,
        SpoamState.PHI_MINUS: (h_ccw - v_cw) * _INV_SQRT2,
        SpoamState.PSI_PLUS: (h_cw + v_ccw) * _INV_SQRT2,
        SpoamState.PSI_MINUS: (h_cw - v_ccw) * _INV_SQRT2,
    }


def _spoam_matrix() -> np.ndarray:
    return np.array(list(spoam_basis().values()))


def bell_to_spoam(state: HyperState, display_normalization: bool = False) -> np.ndarray:
    """Coefficients T[a, b] of ``state`` on s_a ⊗ s_b, s in (φ⁺, φ⁻, ψ⁺, ψ⁻).

    With ``display_normalization`` the coefficients refer to φ±, ψ± written
    without their 1/√2, i.e. they are halved.
    """
    if state.dims != PAIR_DIMS:
        raise DimensionError(f"expected a two-photon state {PAIR_DIMS}, got {state.dims}")
    s = _spoam_matrix()
    table = s.conj() @ state.amplitudes @ s.conj().T
    return table / 2 if display_normalization else table


def spoam_to_bell(table: np.ndarray, display_normalization: bool = False) -> HyperState:
    """Inverse of bell_to_spoam."""
    t = np.asarray(table, dtype=complex)
    if t.shape != (4, 4):
        raise DimensionError(f"expected a 4x4 coefficient table, got {t.shape}")
    if display_normalization:
        t = 2 * t
    s = _spoam_matrix()
    return HyperState(s.T @ t @ s, PAIR_DIMS)


def spoam_pair_labels() -> dict[tuple[SpoamState, SpoamState], Syndrome]:
    """Which Bell label each pair of single-photon outcomes belongs to."""
    order = list(SpoamState)
    labels: dict[tuple[SpoamState, SpoamState], Syndrome] = {}
    for label, state in hyper_bell_states().items():
        table = bell_to_spoam(state)
        for a, b in zip(*np.nonzero(np.abs(table) > SUPPORT_TOLERANCE), strict=True):
            labels[(order[a], order[b])] = label
    return labels


def state_fidelity(a: HyperState | np.ndarray, b: HyperState | np.ndarray) -> float:
    """|⟨a|b⟩|² / (‖a‖²‖b‖²); global phases drop out."""
    va = a.vector if isinstance(a, HyperState) else np.asarray(a, dtype=complex).reshape(-1)
    vb = b.vector if isinstance(b, HyperState) else np.asarray(b, dtype=complex).reshape(-1)
    if va.shape != vb.shape:
        raise DimensionError(f"states of size {va.size} and {vb.size} cannot be compared")
    na, nb = float(np.real(np.vdot(va, va))), float(np.real(np.vdot(vb, vb)))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(abs(np.vdot(va, vb)) ** 2 / (na * nb))


def oam_density(state: HyperState, axis: int) -> np.ndarray:
    """2×2 reduced density matrix of the OAM of the photon on ``axis``."""
    if state.dims[axis] != 4:
        raise DimensionError(f"subsystem {axis} carries no OAM")
    amp = np.moveaxis(state.amplitudes, axis, 0).reshape(2, 2, -1)  # (pol, oam, rest)
    return np.einsum("pir,pjr->ij", amp, amp.conj())
