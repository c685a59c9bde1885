"""Matrix permanents for multi-photon transition amplitudes.

Ryser's inclusion-exclusion formula is evaluated in vectorized form: every
column subset is one row of a cached 0/1 mask table, so the row sums of all
subsets come from a single matrix product. The batched variants evaluate a
stack of equally sized matrices at once, which is what the optimizer and the
appendix search need.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from ..core.errors import DimensionError, PhotonLimitError

MAX_PHOTONS = 12


@lru_cache(maxsize=MAX_PHOTONS + 1)
def _subset_table(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (masks, signs) for all 2^k column subsets of a k×k matrix."""
    codes = np.arange(1 << k, dtype=np.int64)
    masks = ((codes[:, None] >> np.arange(k)) & 1).astype(float)
    sizes = masks.sum(axis=1).astype(int)
    signs = np.where((k - sizes) % 2 == 0, 1.0, -1.0)
    masks.setflags(write=False)
    signs.setflags(write=False)
    return masks, signs


def _check_stack(m: np.ndarray) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DimensionError(f"expected a stack of square matrices, got shape {arr.shape}")
    if arr.shape[1] > MAX_PHOTONS:
        raise PhotonLimitError(
            f"permanent of a {arr.shape[1]}x{arr.shape[1]} matrix exceeds the "
            f"{MAX_PHOTONS}-photon limit"
        )
    return arr


def _check_square(m: np.ndarray) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"permanent needs a square matrix, got shape {arr.shape}")
    return _check_stack(arr[None])[0]


def permanents(stack: np.ndarray) -> np.ndarray:
    """Permanents of a (E, k, k) stack; returns shape (E,)."""
    arr = _check_stack(stack)
    e, k = arr.shape[0], arr.shape[1]
    if k == 0:
        return np.ones(e, dtype=complex)
    masks, signs = _subset_table(k)
    row_sums = arr @ masks.T  # (E, k, 2^k)
    return np.prod(row_sums, axis=1) @ signs


def permanent_gradients(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Permanents and their entrywise derivatives for a (E, k, k) stack.

    The permanent is linear in each entry, so d perm / d m[i, l] is the
    permanent of the minor without row i and column l. All minors come out of
    the same subset table by dropping the i-th row sum from each product.
    """
    arr = _check_stack(stack)
    e, k = arr.shape[0], arr.shape[1]
    if k == 0:
        return np.ones(e, dtype=complex), np.zeros((e, 0, 0), dtype=complex)
    masks, signs = _subset_table(k)
    row_sums = arr @ masks.T  # (E, k, S)
    ones = np.ones((e, 1, row_sums.shape[2]), dtype=complex)
    prefix = np.cumprod(np.concatenate([ones, row_sums[:, :-1]], axis=1), axis=1)
    suffix = np.cumprod(np.concatenate([ones, row_sums[:, :0:-1]], axis=1), axis=1)[:, ::-1]
    excluded = prefix * suffix  # product over all rows except i
    values = (prefix[:, -1] * row_sums[:, -1]) @ signs
    grads = (excluded * signs) @ masks
    return values, grads


def permanent(m: np.ndarray) -> complex:
    """Permanent of a square complex matrix (Ryser); the 0×0 permanent is 1."""
    arr = _check_square(m)
    if arr.shape[0] == 1:
        return complex(arr[0, 0])
    return complex(permanents(arr[None])[0])


def permanent_gradient(m: np.ndarray) -> tuple[complex, np.ndarray]:
    """Permanent of ``m`` and d perm / d m[i, l] for every entry."""
    arr = _check_square(m)
    values, grads = permanent_gradients(arr[None])
    return complex(values[0]), grads[0]


def permanent_naive(m: np.ndarray) -> complex:
    """All-permutations expansion; reference oracle for small matrices."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"permanent needs a square matrix, got shape {arr.shape}")
    k = arr.shape[0]
    if k > 8:
        raise PhotonLimitError("naive permanent is limited to 8x8 matrices")
    rows = np.arange(k)
    total = 0.0 + 0.0j
    for perm in itertools.permutations(range(k)):
        total += np.prod(arr[rows, list(perm)])
    return complex(total)
