"""Precompiled gate objectives and their gradients.

A GateProblem fixes the logical basis, the ancilla scheme, the target and,
for the reduced search space, the lift onto the quad-rail basis. Evaluating a
transform then only gathers submatrices and batches their permanents.

Gradients use the convention ∂f/∂Re t + i·∂f/∂Im t, so a small step
``t + η·grad`` increases ``f`` by about ``η·‖grad‖²``.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.linalg import svd, svdvals

from ..core.enums import SearchSpace
from ..core.errors import DimensionError, NumericalError
from ..fock.permanent import permanent_gradients, permanents
from ..fock.simulator import TransformLike, as_matrix, fock_normalization, repeated_modes
from ..fock.states import ModeTransform
from ..gates.metrics import GateMetrics, MeasurementScheme, score
from ..gates.reduction import ReducedLift, embed_reduced_block, reduced_lift
from ..gates.targets import LogicalBasis, TargetGate, quad_rail_basis, reduced_basis

if TYPE_CHECKING:
    from .search import OptimizationConfig

dataclass_kwargs = {"slots": True}

FD_STEP = 1e-6


@dataclass(frozen=True, eq=False, **dataclass_kwargs)
class _EntryGroup:
    """Map entries whose input and output carry the same photon number."""

    rows: np.ndarray  # (E,) output basis index
    cols: np.ndarray  # (E,) input basis index
    mode_rows: np.ndarray  # (E, n) output modes, with multiplicity
    mode_cols: np.ndarray  # (E, n) input modes, with multiplicity
    norm: np.ndarray  # (E,)


@dataclass(frozen=True, eq=False, **dataclass_kwargs)
class Evaluation:
    fidelity: float
    success_probability: float
    fidelity_gradient: np.ndarray | None = None
    probability_gradient: np.ndarray | None = None

    @property
    def metrics(self) -> GateMetrics:
        return GateMetrics(self.fidelity, self.success_probability)


class GateProblem:
    """F and P of a mode transform for one (basis, scheme, target) combination."""

    def __init__(
        self,
        basis: LogicalBasis,
        scheme: MeasurementScheme,
        target: TargetGate,
        lift: ReducedLift | None = None,
        spectator_phases: Mapping[str, complex] | None = None,
    ) -> None:
        scored_basis = lift.full_basis if lift is not None else basis
        if scored_basis.labels != target.basis.labels:
            raise DimensionError("target basis does not match the scored basis")
        if lift is not None and lift.reduced.labels != basis.labels:
            raise DimensionError("lift does not start from the given basis")

        self.basis = basis
        self.scheme = scheme
        self.target = target
        self.lift = lift
        self.spectator_phases = dict(spectator_phases or {})
        self.mode_count = len(basis.mode_roles) + len(scheme.ancilla_modes)

        m = self.mode_count
        inputs = [scheme.place(s, m, scheme.ancilla_input) for s in basis.states]
        outputs = [scheme.place(s, m, scheme.herald_pattern) for s in basis.states]
        self.photon_numbers = np.array([s.photon_count for s in inputs], dtype=float)
        # A reduced iterate stands for the block at unit σ beside its spectator
        # phases, the whole 9-mode transform then rescaled by max(1, |phase|).
        if lift is not None:
            modulus = max(1.0, lift.phase_modulus)
            self.spectator_scale = modulus ** -lift.full_photon_numbers(self.photon_numbers)
        else:
            self.spectator_scale = np.ones(basis.dimension)

        buckets: dict[int, list[tuple[int, int]]] = {}
        for i, inp in enumerate(inputs):
            for j, out in enumerate(outputs):
                if inp.photon_count == out.photon_count:
                    buckets.setdefault(inp.photon_count, []).append((j, i))
        self._groups: list[_EntryGroup] = []
        for _, pairs in sorted(buckets.items()):
            rows = np.array([j for j, _ in pairs], dtype=int)
            cols = np.array([i for _, i in pairs], dtype=int)
            self._groups.append(
                _EntryGroup(
                    rows=rows,
                    cols=cols,
                    mode_rows=np.array([repeated_modes(outputs[j]) for j in rows], dtype=int),
                    mode_cols=np.array([repeated_modes(inputs[i]) for i in cols], dtype=int),
                    norm=np.array(
                        [
                            1.0 / (fock_normalization(outputs[j]) * fock_normalization(inputs[i]))
                            for j, i in pairs
                        ]
                    ),
                )
            )

    @classmethod
    def from_config(cls, cfg: OptimizationConfig) -> GateProblem:
        scheme = MeasurementScheme.with_patterns(
            cfg.mode_count, cfg.ancilla_input, cfg.herald_pattern
        )
        if cfg.search_space is SearchSpace.REDUCED:
            return cls(
                reduced_basis(),
                scheme,
                cfg.target_gate(),
                lift=reduced_lift(cfg.spectator_phases),
                spectator_phases=cfg.spectator_phases,
            )
        return cls(quad_rail_basis(), scheme, cfg.target_gate())

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    def _check(self, t: TransformLike) -> np.ndarray:
        mat = as_matrix(t)
        if mat.shape != (self.mode_count, self.mode_count):
            raise DimensionError(
                f"expected a {self.mode_count}x{self.mode_count} transform, got {mat.shape}"
            )
        return mat

    def evaluate(self, t: TransformLike, gradient: bool = False) -> Evaluation:
        mat = self._check(t)
        u, s, vh = svd(mat)
        sigma = float(s[0]) if s.size else 0.0
        if sigma <= 0.0:
            zeros = np.zeros_like(mat, dtype=complex) if gradient else None
            return Evaluation(0.0, 0.0, zeros, zeros)

        d = self.dimension
        raw = np.zeros((d, d), dtype=complex)
        sub_grads: list[np.ndarray] = []
        for g in self._groups:
            sub = mat[g.mode_rows[:, :, None], g.mode_cols[:, None, :]]
            if gradient:
                values, grads = permanent_gradients(sub)
                sub_grads.append(grads)
            else:
                values = permanents(sub)
            raw[g.rows, g.cols] = values * g.norm

        column_scale = sigma**-self.photon_numbers
        rescaled = raw * column_scale[None, :]
        scored = self.lift.apply(rescaled) if self.lift is not None else rescaled
        scored = scored * self.spectator_scale[None, :]
        omega = np.asarray(self.target.matrix)
        m = score(scored, omega)
        if not gradient:
            return Evaluation(m.fidelity, m.success_probability)

        g_fid, g_prob = _score_gradients(scored, omega)
        g_fid, g_prob = g_fid * self.spectator_scale, g_prob * self.spectator_scale
        if self.lift is not None:
            g_fid, g_prob = self.lift.pullback(g_fid), self.lift.pullback(g_prob)
        top = np.outer(u[:, 0], vh[0])
        return Evaluation(
            m.fidelity,
            m.success_probability,
            self._to_transform(g_fid, rescaled, column_scale, sub_grads, sigma, top),
            self._to_transform(g_prob, rescaled, column_scale, sub_grads, sigma, top),
        )

    def _to_transform(
        self,
        g_map: np.ndarray,
        rescaled: np.ndarray,
        column_scale: np.ndarray,
        sub_grads: list[np.ndarray],
        sigma: float,
        top: np.ndarray,
    ) -> np.ndarray:
        """Chain rule from the rescaled map back to the transform entries."""
        m = self.mode_count
        out = np.zeros((m, m), dtype=complex)
        for g, grads in zip(self._groups, sub_grads, strict=True):
            weight = g_map[g.rows, g.cols] * column_scale[g.cols] * g.norm
            contrib = weight[:, None, None] * np.conj(grads)
            rows = np.broadcast_to(g.mode_rows[:, :, None], contrib.shape)
            cols = np.broadcast_to(g.mode_cols[:, None, :], contrib.shape)
            np.add.at(out, (rows, cols), contrib)
        # Column i of the rescaled map scales as sigma^-n_i.
        gamma = float(np.real(np.sum(self.photon_numbers[None, :] * np.conj(g_map) * rescaled)))
        out -= (gamma / sigma) * top
        return out

    def metrics(self, t: TransformLike) -> GateMetrics:
        return self.evaluate(t).metrics

    def full_transform(self, t: TransformLike) -> ModeTransform:
        """The 9-mode transform a reduced-space iterate stands for."""
        mat = self._check(t)
        if self.lift is None:
            return ModeTransform(mat)
        sigma = float(svdvals(mat)[0])
        block = mat / sigma if sigma > 0 else mat
        return embed_reduced_block(block, self.spectator_phases)


def _score_gradients(a: np.ndarray, omega: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = omega.shape[0]
    s = float(np.real(np.vdot(a, a)))
    if s <= 0.0:
        zeros = np.zeros_like(a)
        return zeros, zeros
    tau = np.vdot(omega, a)
    g_fid = 2.0 * (tau * omega * s - abs(tau) ** 2 * a) / (d * s**2)
    g_prob = 2.0 * a / d
    return g_fid, g_prob


def gradient(
    objective: Callable[[np.ndarray], float], m: TransformLike, h: float = FD_STEP
) -> np.ndarray:
    """Central finite differences over the real and imaginary part of every entry."""
    base = np.array(as_matrix(m), dtype=complex, copy=True)
    if not math.isfinite(objective(base)):
        raise NumericalError("objective is not finite at the starting point")
    out = np.zeros_like(base)
    for idx in np.ndindex(base.shape):
        for unit in (1.0, 1.0j):
            plus, minus = base.copy(), base.copy()
            plus[idx] += h * unit
            minus[idx] -= h * unit
            fp, fm = objective(plus), objective(minus)
            if not (math.isfinite(fp) and math.isfinite(fm)):
                raise NumericalError(f"objective is not finite next to entry {idx}")
            out[idx] += unit * (fp - fm) / (2.0 * h)
    return out


def objective_fidelity(m: TransformLike, cfg: OptimizationConfig) -> float:
    return GateProblem.from_config(cfg).evaluate(m).fidelity
