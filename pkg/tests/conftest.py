"""Shared fixtures for the hyper-qec test suite."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
import pytest
from scipy.stats import unitary_group

from hyper_qec.gates.appendix import AppendixReport, load_appendix_matrix, verify_appendix


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def haar_unitary(n: int, seed: int) -> np.ndarray:
    return np.asarray(unitary_group.rvs(n, random_state=seed), dtype=complex)


@pytest.fixture
def haar() -> Callable[[int, int], np.ndarray]:
    """Seeded Haar-random unitary factory: haar(n, seed)."""
    return haar_unitary


@pytest.fixture
def beamsplitter() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@pytest.fixture(scope="session")
def appendix_matrix() -> np.ndarray:
    return load_appendix_matrix().matrix


@pytest.fixture(scope="session")
def appendix_report() -> AppendixReport:
    return verify_appendix()
