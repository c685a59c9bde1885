"""Minimal unitary dilation of contraction matrices.

A contraction m = U·Σ·V† with k singular values below one embeds into an
(M + k)-mode unitary

    [[ m,              U_k·√(1 − Σ_k²) ],
     [ √(1 − Σ_k²)·V_k†,   −Σ_k        ]]

so only k extra vacuum modes are needed. Singular values within
``unit_tolerance`` of one count as exactly one.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import svd, svdvals

from ..core.errors import NotAContractionError
from ..core.logging_config import get_logger
from ..fock.simulator import TransformLike, as_matrix
from ..fock.states import ModeTransform

logger = get_logger(__name__)

UNIT_TOLERANCE = 1e-9
# Default for compiling printed matrices: the bundled appendix block sits
# 3.3e-3 below a unit singular value once rescaled.
COMPILE_UNIT_TOLERANCE = 5e-3


def singular_values(m: TransformLike) -> list[float]:
    """Descending singular values."""
    return [float(s) for s in svdvals(as_matrix(m))]


def rescale_to_contraction(m: TransformLike) -> tuple[ModeTransform, float]:
    """Divide by σ_max when it exceeds one; returns the matrix and the factor used."""
    mat = as_matrix(m)
    sigma = float(svdvals(mat)[0]) if mat.size else 0.0
    if sigma <= 1.0:
        return ModeTransform(mat), 1.0
    logger.warning("Rescaled input to a contraction", extra={"sigma_max": sigma})
    return ModeTransform(mat / sigma), sigma


def dilate(m: TransformLike, unit_tolerance: float = UNIT_TOLERANCE) -> ModeTransform:
    mat = as_matrix(m)
    u, s, vh = svd(mat)
    if s.size and s[0] > 1.0 + unit_tolerance:
        raise NotAContractionError(
            f"largest singular value {s[0]:.12g} exceeds 1; rescale the matrix "
            "(for example with rescale_to_contraction) before dilating"
        )
    s = np.where(np.abs(s - 1.0) <= unit_tolerance, 1.0, s)
    defect = np.flatnonzero(s < 1.0)
    n, k = mat.shape[0], defect.size

    out = np.zeros((n + k, n + k), dtype=complex)
    out[:n, :n] = (u * s) @ vh
    c = np.sqrt(1.0 - s[defect] ** 2)
    out[:n, n:] = u[:, defect] * c
    out[n:, :n] = c[:, None] * vh[defect]
    out[n:, n:] = -np.diag(s[defect])
    logger.debug("Dilated contraction", extra={"modes": n, "extra_modes": int(k)})
    return ModeTransform(out)
