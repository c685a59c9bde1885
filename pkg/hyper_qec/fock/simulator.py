"""Fock-space evolution through linear-optical mode transforms."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from scipy.special import factorial

from ..core.errors import DimensionError, PhotonLimitError
from .permanent import MAX_PHOTONS, permanent, permanent_gradient
from .states import PRUNE_TOLERANCE, FockBasisState, ModeTransform, PhotonicState, enumerate_basis

_SQRT_FACTORIALS = np.sqrt(factorial(np.arange(MAX_PHOTONS + 1), exact=False))

TransformLike = ModeTransform | np.ndarray


def as_matrix(t: TransformLike) -> np.ndarray:
    return t.matrix if isinstance(t, ModeTransform) else np.asarray(t, dtype=complex)


def _as_state(s: FockBasisState | Sequence[int]) -> FockBasisState:
    return s if isinstance(s, FockBasisState) else FockBasisState(tuple(s))


def repeated_modes(state: FockBasisState) -> list[int]:
    """Mode index of every photon, with multiplicity: (0, 2, 1) -> [1, 1, 2]."""
    return [mode for mode, n in enumerate(state.occupations) for _ in range(n)]


def fock_normalization(state: FockBasisState) -> float:
    return float(np.prod(_SQRT_FACTORIALS[list(state.occupations)]))


def _prepare(
    t: TransformLike, input: FockBasisState | Sequence[int], output: FockBasisState | Sequence[int]
) -> tuple[np.ndarray, FockBasisState, FockBasisState] | None:
    mat = as_matrix(t)
    inp, out = _as_state(input), _as_state(output)
    m = mat.shape[0]
    if inp.mode_count != m or out.mode_count != m:
        raise DimensionError(
            f"states have {inp.mode_count}/{out.mode_count} modes, transform has {m}"
        )
    n = inp.photon_count
    if n != out.photon_count:
        return None
    if n > MAX_PHOTONS:
        raise PhotonLimitError(f"{n} photons exceed the {MAX_PHOTONS}-photon limit")
    return mat, inp, out


def transition_amplitude(
    t: TransformLike,
    input: FockBasisState | Sequence[int],
    output: FockBasisState | Sequence[int],
) -> complex:
    """⟨output| U(t) |input⟩ = perm(t[output|input]) / sqrt(∏ in! ∏ out!).

    Differing photon numbers give 0.
    """
    prepared = _prepare(t, input, output)
    if prepared is None:
        return 0.0 + 0.0j
    mat, inp, out = prepared
    rows, cols = repeated_modes(out), repeated_modes(inp)
    sub = mat[np.ix_(rows, cols)]
    return permanent(sub) / (fock_normalization(inp) * fock_normalization(out))


def transition_gradient(
    t: TransformLike,
    input: FockBasisState | Sequence[int],
    output: FockBasisState | Sequence[int],
) -> tuple[complex, np.ndarray]:
    """Amplitude and its holomorphic derivative d amplitude / d t[j, l]."""
    mat = as_matrix(t)
    prepared = _prepare(mat, input, output)
    grad = np.zeros_like(mat, dtype=complex)
    if prepared is None:
        return 0.0 + 0.0j, grad
    mat, inp, out = prepared
    rows, cols = repeated_modes(out), repeated_modes(inp)
    value, sub_grad = permanent_gradient(mat[np.ix_(rows, cols)])
    norm = fock_normalization(inp) * fock_normalization(out)
    if rows:
        np.add.at(grad, (np.asarray(rows)[:, None], np.asarray(cols)[None, :]), sub_grad)
    return value / norm, grad / norm


def apply_transform(t: TransformLike, s: PhotonicState) -> PhotonicState:
    """Evolve ``s`` through ``t``; amplitudes below 1e-14 are dropped."""
    mat = as_matrix(t)
    if mat.shape[0] != s.mode_count:
        raise DimensionError(
            f"state has {s.mode_count} modes, transform has {mat.shape[0]}"
        )
    acc: dict[FockBasisState, complex] = {}
    outputs_by_n: dict[int, list[FockBasisState]] = {}
    for inp, amp in s.terms.items():
        n = inp.photon_count
        outputs = outputs_by_n.setdefault(n, enumerate_basis(s.mode_count, n))
        for out in outputs:
            a = transition_amplitude(mat, inp, out)
            if a != 0:
                acc[out] = acc.get(out, 0.0) + amp * a
    return PhotonicState(acc, s.mode_count).pruned(PRUNE_TOLERANCE)


def postselect(
    s: PhotonicState, ancilla_modes: Sequence[int], pattern: Sequence[int]
) -> PhotonicState:
    """Keep terms showing ``pattern`` on ``ancilla_modes`` and drop those modes.

    The result is not renormalized: its squared norm is the herald probability.
    """
    anc = list(ancilla_modes)
    if len(anc) != len(pattern):
        raise DimensionError("pattern length must equal the number of ancilla modes")
    if any(not 0 <= m < s.mode_count for m in anc) or len(set(anc)) != len(anc):
        raise DimensionError(f"invalid ancilla modes {anc} for {s.mode_count} modes")
    keep = [m for m in range(s.mode_count) if m not in set(anc)]
    want = tuple(int(p) for p in pattern)
    kept: dict[FockBasisState, complex] = {}
    for state, amp in s.terms.items():
        if state.take(anc).occupations == want:
            kept[state.take(keep)] = amp
    return PhotonicState(kept, len(keep))
