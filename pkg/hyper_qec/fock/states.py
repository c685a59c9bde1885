from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from math import comb
from types import MappingProxyType

import numpy as np

from ..core.errors import DimensionError

dataclass_kwargs = {"slots": True}

PRUNE_TOLERANCE = 1e-14


@dataclass(frozen=True, order=True, **dataclass_kwargs)
class FockBasisState:
    """Photon count per optical mode."""

    occupations: tuple[int, ...]

    def __post_init__(self) -> None:
        occ = tuple(int(n) for n in self.occupations)
        if any(n < 0 for n in occ):
            raise ValueError(f"occupations must be non-negative, got {occ}")
        object.__setattr__(self, "occupations", occ)

    @classmethod
    def of(cls, *occupations: int) -> FockBasisState:
        return cls(tuple(occupations))

    @property
    def mode_count(self) -> int:
        return len(self.occupations)

    @property
    def photon_count(self) -> int:
        return sum(self.occupations)

    def concat(self, other: FockBasisState) -> FockBasisState:
        return FockBasisState(self.occupations + other.occupations)

    def take(self, modes: Sequence[int]) -> FockBasisState:
        return FockBasisState(tuple(self.occupations[i] for i in modes))

    def __str__(self) -> str:
        return "|" + ",".join(str(n) for n in self.occupations) + "⟩"


def _compositions(modes: int, photons: int) -> Iterator[tuple[int, ...]]:
    if modes == 1:
        yield (photons,)
        return
    for first in range(photons, -1, -1):
        for rest in _compositions(modes - 1, photons - first):
            yield (first,) + rest


def enumerate_basis(mode_count: int, photon_count: int) -> list[FockBasisState]:
    """All photon_count-photon states over mode_count modes, lexicographic descending.

    (2, 1) gives [|1,0⟩, |0,1⟩]; the list length is C(n + M - 1, M - 1).
    """
    if mode_count < 1:
        raise ValueError("mode_count must be at least 1")
    if photon_count < 0:
        raise ValueError("photon_count must be non-negative")
    states = [FockBasisState(c) for c in _compositions(mode_count, photon_count)]
    assert len(states) == comb(photon_count + mode_count - 1, mode_count - 1)
    return states


@dataclass(frozen=True, **dataclass_kwargs)
class PhotonicState:
    """Sparse amplitude map over Fock basis states; may be subnormalized."""

    terms: Mapping[FockBasisState, complex]
    mode_count: int

    def __post_init__(self) -> None:
        clean: dict[FockBasisState, complex] = {}
        for state, amp in self.terms.items():
            if state.mode_count != self.mode_count:
                raise DimensionError(
                    f"basis state {state} has {state.mode_count} modes, "
                    f"expected {self.mode_count}"
                )
            clean[state] = complex(amp)
        view = MappingProxyType(clean)
        object.__setattr__(self, "terms", view)

    @classmethod
    def basis(cls, occupations: Sequence[int], amplitude: complex = 1.0) -> PhotonicState:
        state = FockBasisState(tuple(occupations))
        return cls({state: amplitude}, state.mode_count)

    @classmethod
    def zero(cls, mode_count: int) -> PhotonicState:
        return cls({}, mode_count)

    def amplitude(self, state: FockBasisState | Sequence[int]) -> complex:
        key = state if isinstance(state, FockBasisState) else FockBasisState(tuple(state))
        return self.terms.get(key, 0.0 + 0.0j)

    @property
    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.terms.values()))

    @property
    def photon_numbers(self) -> set[int]:
        return {s.photon_count for s in self.terms}

    def scaled(self, c: complex) -> PhotonicState:
        return PhotonicState({s: c * a for s, a in self.terms.items()}, self.mode_count)

    def pruned(self, tol: float = PRUNE_TOLERANCE) -> PhotonicState:
        return PhotonicState(
            {s: a for s, a in self.terms.items() if abs(a) >= tol}, self.mode_count
        )

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True, eq=False, **dataclass_kwargs)
class ModeTransform:
    """Linear map on mode creation operators, stored row-major as an M×M array.

    Not required to be unitary: sub-unitary matrices are evaluated as the
    corresponding block of a dilated unitary with vacuum in the extra modes.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.matrix, dtype=complex, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"mode transform must be square, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("mode transform has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @classmethod
    def identity(cls, mode_count: int) -> ModeTransform:
        return cls(np.eye(mode_count, dtype=complex))

    @property
    def mode_count(self) -> int:
        return int(self.matrix.shape[0])

    def compose(self, other: ModeTransform) -> ModeTransform:
        """Transform equivalent to applying ``other`` first, then ``self``."""
        if other.mode_count != self.mode_count:
            raise DimensionError("cannot compose transforms of different mode counts")
        return ModeTransform(self.matrix @ other.matrix)

    def scaled(self, c: complex) -> ModeTransform:
        return ModeTransform(c * self.matrix)

    def submatrix(self, modes: Sequence[int]) -> ModeTransform:
        idx = list(modes)
        return ModeTransform(self.matrix[np.ix_(idx, idx)])
