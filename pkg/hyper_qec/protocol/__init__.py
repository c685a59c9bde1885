"""Logical-level simulation of the hyperentanglement-assisted code and superdense coding."""

from .code import (
    RECOVERY_FOR_SYNDROME,
    SYNDROME_TABLE,
    RoundTrip,
    SyndromeMeasurement,
    SyndromeRecord,
    apply_channel,
    decode_and_measure,
    encode,
    encoding_gate,
    recover,
    run_code_roundtrip,
)
from .states import (
    CODE_DIMS,
    PAIR_DIMS,
    HyperState,
    bell_to_spoam,
    hyper_bell_states,
    oam_density,
    polarization_qubit,
    spoam_basis,
    spoam_pair_labels,
    spoam_to_bell,
    state_fidelity,
)
from .superdense import MESSAGES, SuperdenseResult, analyse_pair, encode_message, superdense_roundtrip

__all__ = [
    "CODE_DIMS",
    "MESSAGES",
    "PAIR_DIMS",
    "RECOVERY_FOR_SYNDROME",
    "SYNDROME_TABLE",
    "HyperState",
    "RoundTrip",
    "SuperdenseResult",
    "SyndromeMeasurement",
    "SyndromeRecord",
    "analyse_pair",
    "apply_channel",
    "bell_to_spoam",
    "decode_and_measure",
    "encode",
    "encode_message",
    "encoding_gate",
    "hyper_bell_states",
    "oam_density",
    "polarization_qubit",
    "recover",
    "run_code_roundtrip",
    "spoam_basis",
    "spoam_pair_labels",
    "spoam_to_bell",
    "state_fidelity",
    "superdense_roundtrip",
]
