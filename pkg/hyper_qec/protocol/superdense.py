"""Superdense coding over a shared hyperentangled pair.

Alice applies one of four polarization Paulis to her photon of Φ⁺ and
sends it; Bob reads two bits from the φ±/ψ± analysis of both photons.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..core.enums import SpoamState, Syndrome
from ..core.errors import AmbiguousSyndromeError
from ..core.logging_config import get_logger
from .states import (
    HYPER_X,
    HYPER_Z,
    SUPPORT_TOLERANCE,
    HyperState,
    bell_to_spoam,
    hyper_bell_states,
    spoam_pair_labels,
)

logger = get_logger(__name__)

dataclass_kwargs = {"slots": True}

MESSAGES = ("00", "01", "10", "11")

ENCODING_OPERATORS: dict[str, np.ndarray] = {
    "00": np.eye(4, dtype=complex),
    "01": HYPER_Z,
    "10": HYPER_X,
    "11": HYPER_X @ HYPER_Z,
}

MESSAGE_FOR_SYNDROME = {
    Syndrome.PHI_PLUS: "00",
    Syndrome.PHI_MINUS: "01",
    Syndrome.PSI_PLUS: "10",
    Syndrome.PSI_MINUS: "11",
}


@dataclass(frozen=True, **dataclass_kwargs)
class SuperdenseResult:
    message: str
    decoded: str
    syndrome: Syndrome
    outcome: tuple[SpoamState, SpoamState]

    @property
    def ok(self) -> bool:
        return self.message == self.decoded

    def as_dict(self) -> dict[str, Any]:
        return {
            "message": self.message,
            "decoded": self.decoded,
            "syndrome": self.syndrome.value,
            "outcome": [o.value for o in self.outcome],
            "ok": self.ok,
        }


def _check_message(message: str) -> str:
    message = str(message)
    if message not in ENCODING_OPERATORS:
        raise ValueError(f"message must be one of {', '.join(MESSAGES)}, got {message!r}")
    return message


def encode_message(message: str) -> HyperState:
    """Alice's Pauli on the polarization of photon A of Φ⁺."""
    op = ENCODING_OPERATORS[_check_message(message)]
    return hyper_bell_states()[Syndrome.PHI_PLUS].apply(op, (0,))


def analyse_pair(
    state: HyperState, rng: np.random.Generator | None = None
) -> tuple[Syndrome, tuple[SpoamState, SpoamState]]:
    """Bell label of a two-photon state from its two single-photon analyses."""
    table = bell_to_spoam(state)
    probs = np.abs(table) ** 2
    order = list(SpoamState)
    labels = spoam_pair_labels()
    if rng is not None:
        flat = probs.reshape(-1) / probs.sum()
        a, b = divmod(int(rng.choice(flat.size, p=flat)), 4)
        outcome = (order[a], order[b])
        return labels[outcome], outcome

    support = [
        (order[a], order[b]) for a, b in zip(*np.nonzero(probs > SUPPORT_TOLERANCE), strict=True)
    ]
    found = {labels[pair] for pair in support}
    if len(found) != 1:
        raise AmbiguousSyndromeError(
            f"outcome pairs point to {sorted(f.value for f in found)}; not a hyper Bell state"
        )
    return found.pop(), support[0]


def superdense_roundtrip(message: str, rng: np.random.Generator | None = None) -> SuperdenseResult:
    """Send two classical bits with one photon; returns what Bob decodes."""
    message = _check_message(message)
    state = encode_message(message)
    syndrome, outcome = analyse_pair(state, rng)
    result = SuperdenseResult(message, MESSAGE_FOR_SYNDROME[syndrome], syndrome, outcome)
    logger.debug(
        "Superdense round trip",
        extra={"sent": message, "decoded": result.decoded, "syndrome": syndrome.value},
    )
    return result
