"""Hyperentanglement-assisted code against polarization flips.

Alice holds the information photon A and half A₁ of a shared Φ⁺; Bob holds
B₁. Encoding (and decoding) is one controlled-sign between the polarization
of A and the polarization of A₁. After decoding, Bob analyses A₁ and B₁ in
the φ±/ψ± basis; the resulting Bell label names the channel error and the
recovery to apply to A.

Subsystem order throughout: (A, A₁, B₁), dims (2, 4, 4).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..core.enums import ErrorKind, Recovery, SpoamState, Syndrome
from ..core.errors import AmbiguousSyndromeError, DimensionError
from ..core.logging_config import get_logger
from .states import (
    CODE_DIMS,
    HYPER_X,
    IDENTITY_2,
    POLARIZATION_X,
    POLARIZATION_Z,
    SUPPORT_TOLERANCE,
    HyperState,
    hyper_bell_states,
    polarization_qubit,
    spoam_basis,
    spoam_pair_labels,
    state_fidelity,
)

logger = get_logger(__name__)

dataclass_kwargs = {"slots": True}


@dataclass(frozen=True, **dataclass_kwargs)
class SyndromeRecord:
    error: ErrorKind
    syndrome: Syndrome
    recovery: Recovery


SYNDROME_TABLE: dict[ErrorKind, SyndromeRecord] = {
    ErrorKind.I: SyndromeRecord(ErrorKind.I, Syndrome.PHI_PLUS, Recovery.I),
    ErrorKind.XA: SyndromeRecord(ErrorKind.XA, Syndrome.PHI_MINUS, Recovery.X),
    ErrorKind.XA1: SyndromeRecord(ErrorKind.XA1, Syndrome.PSI_PLUS, Recovery.Z),
    ErrorKind.XAXA1: SyndromeRecord(ErrorKind.XAXA1, Syndrome.PSI_MINUS, Recovery.ZX),
}

RECOVERY_FOR_SYNDROME = {r.syndrome: r.recovery for r in SYNDROME_TABLE.values()}

RECOVERY_OPERATORS = {
    Recovery.I: IDENTITY_2,
    Recovery.X: POLARIZATION_X,
    Recovery.Z: POLARIZATION_Z,
    Recovery.ZX: POLARIZATION_Z @ POLARIZATION_X,
}


@dataclass(frozen=True, **dataclass_kwargs)
class SyndromeMeasurement:
    syndrome: Syndrome
    residual: HyperState
    outcome: tuple[SpoamState, SpoamState]


@dataclass(frozen=True, **dataclass_kwargs)
class RoundTrip:
    error: ErrorKind
    syndrome: Syndrome
    recovery: Recovery
    fidelity: float
    outcome: tuple[SpoamState, SpoamState]

    @property
    def expected(self) -> SyndromeRecord:
        return SYNDROME_TABLE[self.error]

    @property
    def matches_table(self) -> bool:
        return self.syndrome is self.expected.syndrome and self.recovery is self.expected.recovery

    def as_dict(self) -> dict[str, Any]:
        return {
            "error": self.error.value,
            "syndrome": self.syndrome.value,
            "recovery": self.recovery.value,
            "expected_syndrome": self.expected.syndrome.value,
            "expected_recovery": self.expected.recovery.value,
            "fidelity": self.fidelity,
            "outcome": [o.value for o in self.outcome],
            "matches_table": self.matches_table,
        }


def encoding_gate() -> np.ndarray:
    """Controlled-sign on pol_A ⊗ (A₁: H↺, H↻, V↺, V↻): −1 when both are V."""
    diag = np.ones(8, dtype=complex)
    diag[4 + 2] = diag[4 + 3] = -1
    return np.diag(diag)


def _check_code_state(state: HyperState) -> None:
    if state.dims != CODE_DIMS:
        raise DimensionError(f"expected a code state with subsystems {CODE_DIMS}, got {state.dims}")


def encode(alpha: complex, beta: complex) -> HyperState:
    """Controlled-sign applied to |ψ⟩^A ⊗ Φ⁺^{A₁B₁}."""
    psi = polarization_qubit(alpha, beta)
    initial = HyperState.product(psi, hyper_bell_states()[Syndrome.PHI_PLUS])
    return initial.apply(encoding_gate(), (0, 1))


def apply_channel(state: HyperState, error: ErrorKind | str) -> HyperState:
    """Polarization flips on A and/or A₁; OAM and B₁ are untouched."""
    _check_code_state(state)
    error = ErrorKind(error)
    if error in (ErrorKind.XA, ErrorKind.XAXA1):
        state = state.apply(POLARIZATION_X, (0,))
    if error in (ErrorKind.XA1, ErrorKind.XAXA1):
        state = state.apply(HYPER_X, (1,))
    return state


def decode_and_measure(
    state: HyperState, rng: np.random.Generator | None = None
) -> SyndromeMeasurement:
    """Decode, then analyse A₁ and B₁ in the φ±/ψ± basis.

    Without ``rng`` the analysis is an exact projection: every outcome pair
    with nonzero probability must carry the same Bell label, otherwise the
    syndrome is ambiguous. With ``rng`` one pair is drawn by the Born rule.
    """
    _check_code_state(state)
    decoded = state.apply(encoding_gate(), (0, 1)).amplitudes
    basis = spoam_basis()
    outcomes = list(basis)
    s = np.array(list(basis.values()))
    # amp[a_pol, x, y] over outcome pairs (x on A₁, y on B₁)
    projected = np.einsum("xi,yj,pij->xyp", s.conj(), s.conj(), decoded)
    probs = np.real(np.einsum("xyp,xyp->xy", projected, projected.conj()))
    labels = spoam_pair_labels()

    if rng is None:
        support = [
            (outcomes[x], outcomes[y])
            for x, y in zip(*np.nonzero(probs > SUPPORT_TOLERANCE), strict=True)
        ]
        found = {labels[pair] for pair in support}
        if len(found) != 1:
            raise AmbiguousSyndromeError(
                f"outcome pairs point to {sorted(f.value for f in found)}; "
                "state is outside the code's reachable set"
            )
        syndrome = found.pop()
        bell = hyper_bell_states()[syndrome].amplitudes
        residual = np.einsum("ij,pij->p", bell.conj(), decoded)
        x, y = max(
            ((outcomes.index(a), outcomes.index(b)) for a, b in support),
            key=lambda xy: probs[xy],
        )
    else:
        flat = probs.reshape(-1) / probs.sum()
        k = int(rng.choice(flat.size, p=flat))
        x, y = divmod(k, 4)
        syndrome = labels[(outcomes[x], outcomes[y])]
        residual = projected[x, y]

    return SyndromeMeasurement(
        syndrome, HyperState.normalized(residual, (2,)), (outcomes[x], outcomes[y])
    )


def recover(residual: HyperState, syndrome: Syndrome | str) -> HyperState:
    syndrome = Syndrome(syndrome)
    if residual.dims != (2,):
        raise DimensionError(f"expected a single polarization qubit, got {residual.dims}")
    return residual.apply(RECOVERY_OPERATORS[RECOVERY_FOR_SYNDROME[syndrome]], (0,))


def run_code_roundtrip(
    alpha: complex,
    beta: complex,
    error: ErrorKind | str,
    rng: np.random.Generator | None = None,
) -> RoundTrip:
    """Encode, send through the channel, decode, measure and recover."""
    error = ErrorKind(error)
    psi = polarization_qubit(alpha, beta)
    received = apply_channel(encode(alpha, beta), error)
    measured = decode_and_measure(received, rng)
    recovered = recover(measured.residual, measured.syndrome)
    result = RoundTrip(
        error=error,
        syndrome=measured.syndrome,
        recovery=RECOVERY_FOR_SYNDROME[measured.syndrome],
        fidelity=state_fidelity(recovered, psi),
        outcome=measured.outcome,
    )
    logger.debug(
        "Code round trip",
        extra={
            "error": error.value,
            "syndrome": result.syndrome.value,
            "fidelity": result.fidelity,
        },
    )
    return result

