"""Two-stage search for heralded gate implementations.

Stage 1 climbs the process fidelity from a random start until it crosses
``fidelity_threshold``. Stage 2 then climbs the success probability inside the
feasible set F ≥ threshold: close to the threshold it drops the part of ∇P
that lowers F, and a trial point that falls below the threshold is pulled
back by a short F ascent before it is judged. Both stages use gradient ascent
with Armijo backtracking and rescale each iterate to unit largest singular
value, which changes neither F nor P.

run_cycles repeats both stages from independent seeded starts and collects
the distribution of feasible success probabilities.
"""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Any

import numpy as np
import yaml
from scipy.linalg import svdvals

from ..core.config import get_settings
from ..core.enums import SearchSpace
from ..core.errors import ConfigError
from ..core.logging_config import get_logger
from ..fock.simulator import TransformLike, as_matrix
from ..fock.states import ModeTransform
from ..gates.metrics import GateMetrics
from ..gates.reduction import normalize_spectator_phases
from ..gates.targets import TargetGate, target_csign
from .problem import Evaluation, GateProblem

logger = get_logger(__name__)

dataclass_kwargs = {"slots": True}

TARGETS = {"csign": target_csign}

_COMPUTATIONAL_MODES = {SearchSpace.REDUCED: 3, SearchSpace.FULL: 6}
_STATIONARY = 1e-30


@dataclass(**dataclass_kwargs)
class OptimizationConfig:
    search_space: SearchSpace = SearchSpace.REDUCED
    target: str = "csign"
    ancilla_input: tuple[int, ...] = (1, 1, 1)
    herald_pattern: tuple[int, ...] = (1, 1, 1)
    spectator_phases: dict[str, complex] = field(default_factory=dict)
    cycles: int = 200
    seed: int = 0
    fidelity_threshold: float = 1 - 1e-7
    stage1_max_iterations: int = 20000
    stage1_initial_step: float = 0.1
    stage2_max_iterations: int = 20000
    stage2_initial_step: float = 0.01
    stage2_boundary_margin: float = 0.5  # fraction of 1 − threshold
    restore_max_iterations: int = 200
    convergence_tolerance: float = 1e-9
    convergence_window: int = 50
    min_step: float = 1e-14
    armijo: float = 1e-4
    plateau_tolerance: float = 1e-4
    workers: int | None = None
    label: str = ""

    def __post_init__(self) -> None:
        try:
            self.search_space = SearchSpace(self.search_space)
        except ValueError as e:
            raise ConfigError(f"unknown search_space {self.search_space!r}") from e
        self.ancilla_input = tuple(int(n) for n in self.ancilla_input)
        self.herald_pattern = tuple(int(n) for n in self.herald_pattern)
        try:
            self.spectator_phases = normalize_spectator_phases(self.spectator_phases)
        except KeyError as e:
            raise ConfigError(str(e)) from e

        if self.target not in TARGETS:
            raise ConfigError(f"unknown target {self.target!r}; choose from {sorted(TARGETS)}")
        if not 0.0 < self.fidelity_threshold < 1.0:
            raise ConfigError("fidelity_threshold must lie in (0, 1)")
        if self.cycles < 1:
            raise ConfigError("cycles must be >= 1")
        if len(self.ancilla_input) != len(self.herald_pattern):
            raise ConfigError("ancilla_input and herald_pattern need the same length")
        if sum(self.ancilla_input) != sum(self.herald_pattern):
            raise ConfigError("ancilla_input and herald_pattern must carry the same photon number")
        if any(n < 0 for n in self.ancilla_input + self.herald_pattern):
            raise ConfigError("ancilla occupations must be non-negative")
        for name in (
            "stage1_max_iterations",
            "stage2_max_iterations",
            "restore_max_iterations",
            "convergence_window",
        ):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        for name in ("stage1_initial_step", "stage2_initial_step", "min_step"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.stage2_boundary_margin < 0:
            raise ConfigError("stage2_boundary_margin must be non-negative")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("workers must be >= 1")

    @property
    def mode_count(self) -> int:
        return _COMPUTATIONAL_MODES[self.search_space] + len(self.ancilla_input)

    def target_gate(self) -> TargetGate:
        return TARGETS[self.target]()

    def with_overrides(self, **overrides: Any) -> OptimizationConfig:
        """Copy with every non-None override applied (CLI flags win over the file)."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, SearchSpace):
                value = value.value
            elif isinstance(value, tuple):
                value = list(value)
            elif f.name == "spectator_phases":
                value = {k: [complex(v).real, complex(v).imag] for k, v in value.items()}
            out[f.name] = value
        return out


def _parse_phase(value: Any) -> complex:
    if isinstance(value, list | tuple):
        if len(value) != 2:
            raise ConfigError(f"spectator phase must be [real, imag], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def load_config(path: str | Path) -> OptimizationConfig:
    try:
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"config {path} is not valid YAML: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping")
    known = {f.name for f in dataclasses.fields(OptimizationConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys in {path}: {', '.join(unknown)}")
    if "spectator_phases" in data:
        data["spectator_phases"] = {
            k: _parse_phase(v) for k, v in (data["spectator_phases"] or {}).items()
        }
    try:
        return OptimizationConfig(**data)
    except TypeError as e:
        raise ConfigError(f"invalid config {path}: {e}") from e


@dataclass(**dataclass_kwargs)
class StageOutcome:
    matrix: np.ndarray
    fidelity: float
    success_probability: float
    iterations: int
    converged: bool
    feasible: bool
    history: list[tuple[float, float]] = field(default_factory=list)

    @property
    def transform(self) -> ModeTransform:
        return ModeTransform(self.matrix)

    @property
    def metrics(self) -> GateMetrics:
        return GateMetrics(self.fidelity, self.success_probability)


@dataclass(**dataclass_kwargs)
class CycleOutcome:
    index: int
    fidelity: float
    success_probability: float
    stage1_converged: bool
    stage2_feasible: bool
    stage1_iterations: int
    stage2_iterations: int
    matrix: np.ndarray | None = None

    @property
    def usable(self) -> bool:
        return self.stage1_converged and self.stage2_feasible

    def as_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "fidelity": self.fidelity,
            "success_probability": self.success_probability,
            "stage1_converged": self.stage1_converged,
            "stage2_feasible": self.stage2_feasible,
            "stage1_iterations": self.stage1_iterations,
            "stage2_iterations": self.stage2_iterations,
        }


@dataclass(**dataclass_kwargs)
class OptimizationResult:
    best_matrix: ModeTransform | None
    metrics: GateMetrics | None
    per_cycle: list[tuple[float, float]]
    seed: int
    wall_time: float
    config: OptimizationConfig
    cycles: list[CycleOutcome] = field(default_factory=list)
    full_matrix: ModeTransform | None = None

    @property
    def failed(self) -> bool:
        return self.best_matrix is None

    @property
    def usable_cycles(self) -> int:
        return len(self.per_cycle)

    @property
    def plateaus(self) -> int:
        return count_plateaus([p for _, p in self.per_cycle], self.config.plateau_tolerance)

    @property
    def singular_values(self) -> list[float]:
        if self.best_matrix is None:
            return []
        return [float(s) for s in svdvals(self.best_matrix.matrix)]

    def as_dict(self) -> dict[str, Any]:
        """Numeric payload; wall_time is reported separately by the caller."""
        return {
            "failed": self.failed,
            "seed": self.seed,
            "cycles": len(self.cycles),
            "usable_cycles": self.usable_cycles,
            "best": self.metrics.as_dict() if self.metrics else None,
            "singular_values": self.singular_values,
            "plateaus": self.plateaus,
            "per_cycle": [
                {"fidelity": f, "success_probability": p} for f, p in self.per_cycle
            ],
            "config": self.config.as_dict(),
        }


def _normalized(t: np.ndarray) -> np.ndarray:
    sigma = float(svdvals(t)[0]) if t.size else 0.0
    return t / sigma if sigma > 0 else t


def _problem_for(cfg: OptimizationConfig, problem: GateProblem | None) -> GateProblem:
    return problem if problem is not None else GateProblem.from_config(cfg)


def _climb_fidelity(
    problem: GateProblem,
    t: np.ndarray,
    ev: Evaluation,
    threshold: float,
    max_iterations: int,
    step: float,
    cfg: OptimizationConfig,
    history: list[tuple[float, float]] | None = None,
) -> tuple[np.ndarray, Evaluation, int]:
    """Armijo ascent on F from (t, ev) until F ≥ threshold or progress stops."""
    iterations = 0
    while ev.fidelity < threshold and iterations < max_iterations:
        g = ev.fidelity_gradient
        assert g is not None
        slope = float(np.real(np.vdot(g, g)))
        if slope < _STATIONARY:
            break
        moved = False
        while step >= cfg.min_step:
            candidate = _normalized(t + step * g)
            trial = problem.evaluate(candidate)
            if trial.fidelity >= ev.fidelity + cfg.armijo * step * slope:
                moved = True
                break
            step *= 0.5
        if not moved:
            break
        iterations += 1
        t = candidate
        ev = problem.evaluate(t, gradient=True)
        if history is not None:
            history.append((ev.fidelity, ev.success_probability))
        step *= 1.5
    return t, ev, iterations


def stage1_fidelity_ascent(
    start: TransformLike, cfg: OptimizationConfig, problem: GateProblem | None = None
) -> StageOutcome:
    """Gradient ascent on F until it reaches ``cfg.fidelity_threshold``.

    Failure to get there (iteration limit, vanishing gradient or a step below
    ``cfg.min_step``) is reported through ``converged=False``.
    """
    problem = _problem_for(cfg, problem)
    t = _normalized(np.array(as_matrix(start), dtype=complex, copy=True))
    ev = problem.evaluate(t, gradient=True)
    history = [(ev.fidelity, ev.success_probability)]
    t, ev, iterations = _climb_fidelity(
        problem,
        t,
        ev,
        cfg.fidelity_threshold,
        cfg.stage1_max_iterations,
        cfg.stage1_initial_step,
        cfg,
        history,
    )

    converged = ev.fidelity >= cfg.fidelity_threshold
    logger.debug(
        "Stage 1 finished",
        extra={"fidelity": ev.fidelity, "iterations": iterations, "converged": converged},
    )
    return StageOutcome(
        matrix=t,
        fidelity=ev.fidelity,
        success_probability=ev.success_probability,
        iterations=iterations,
        converged=converged,
        feasible=converged,
        history=history,
    )


def _restore(
    problem: GateProblem, t: np.ndarray, cfg: OptimizationConfig
) -> tuple[np.ndarray, Evaluation]:
    """Pull an iterate back over the fidelity threshold with a short F ascent."""
    ev = problem.evaluate(t, gradient=True)
    t, ev, _ = _climb_fidelity(
        problem,
        t,
        ev,
        cfg.fidelity_threshold,
        cfg.restore_max_iterations,
        cfg.stage1_initial_step,
        cfg,
    )
    return t, ev


def _ascent_direction(ev: Evaluation, boundary: float) -> np.ndarray:
    """∇P, minus its component along −∇F once F is below ``boundary``."""
    g_p, g_f = ev.probability_gradient, ev.fidelity_gradient
    assert g_p is not None and g_f is not None
    if ev.fidelity >= boundary:
        return g_p
    inner = float(np.real(np.vdot(g_f, g_p)))
    norm = float(np.real(np.vdot(g_f, g_f)))
    if inner >= 0.0 or norm < _STATIONARY:
        return g_p
    return g_p - (inner / norm) * g_f


def stage2_probability_ascent(
    m0: TransformLike, cfg: OptimizationConfig, problem: GateProblem | None = None
) -> StageOutcome:
    """Maximize P while keeping F at or above the threshold.

    Near the threshold the step follows ∇P with its F-decreasing component
    removed, so the iterate slides along the fidelity level set. A trial
    point that still drops below the threshold is restored by a short F
    ascent; it is accepted only when the restored point is feasible and P
    passes the Armijo test. Every accepted iterate is feasible.
    """
    problem = _problem_for(cfg, problem)
    threshold = cfg.fidelity_threshold
    boundary = threshold + cfg.stage2_boundary_margin * (1.0 - threshold)
    t = _normalized(np.array(as_matrix(m0), dtype=complex, copy=True))
    ev = problem.evaluate(t, gradient=True)
    if ev.fidelity < threshold:
        t, ev = _restore(problem, t, cfg)
    if ev.fidelity < threshold:
        logger.warning(
            "Stage 2 start is below the fidelity threshold",
            extra={"fidelity": ev.fidelity, "threshold": threshold},
        )
        history = [(ev.fidelity, ev.success_probability)]
        return StageOutcome(t, ev.fidelity, ev.success_probability, 0, False, False, history)

    history = [(ev.fidelity, ev.success_probability)]
    step = cfg.stage2_initial_step
    iterations = 0
    restorations = 0
    converged = False

    while iterations < cfg.stage2_max_iterations:
        g = _ascent_direction(ev, boundary)
        slope = float(np.real(np.vdot(g, g)))
        if slope < _STATIONARY:
            converged = True
            break
        moved = False
        while step >= cfg.min_step:
            candidate = _normalized(t + step * g)
            trial = problem.evaluate(candidate)
            if trial.fidelity < threshold:
                candidate, trial = _restore(problem, candidate, cfg)
                restorations += 1
            if (
                trial.fidelity >= threshold
                and trial.success_probability
                >= ev.success_probability + cfg.armijo * step * slope
            ):
                moved = True
                break
            step *= 0.5
        if not moved:
            converged = True
            break
        iterations += 1
        t = candidate
        ev = trial if trial.fidelity_gradient is not None else problem.evaluate(t, gradient=True)
        history.append((ev.fidelity, ev.success_probability))
        step *= 1.5
        if len(history) > cfg.convergence_window:
            ref = history[-1 - cfg.convergence_window][1]
            if ev.success_probability - ref <= cfg.convergence_tolerance * abs(ev.success_probability):
                converged = True
                break

    logger.debug(
        "Stage 2 finished",
        extra={
            "fidelity": ev.fidelity,
            "success_probability": ev.success_probability,
            "iterations": iterations,
            "restorations": restorations,
        },
    )
    return StageOutcome(
        t,
        ev.fidelity,
        ev.success_probability,
        iterations,
        converged,
        True,
        history,
    )


def random_start(cfg: OptimizationConfig, cycle_index: int) -> np.ndarray:
    """Complex standard normal entries from the cycle's own generator."""
    rng = np.random.default_rng([cfg.seed, cycle_index])
    m = cfg.mode_count
    return (rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))) / np.sqrt(2.0)


def run_cycle(cfg: OptimizationConfig, cycle_index: int) -> CycleOutcome:
    problem = GateProblem.from_config(cfg)
    first = stage1_fidelity_ascent(random_start(cfg, cycle_index), cfg, problem)
    if not first.converged:
        logger.debug(
            "Cycle discarded after stage 1",
            extra={"cycle": cycle_index, "seed": cfg.seed, "fidelity": first.fidelity},
        )
        return CycleOutcome(
            cycle_index,
            first.fidelity,
            first.success_probability,
            stage1_converged=False,
            stage2_feasible=False,
            stage1_iterations=first.iterations,
            stage2_iterations=0,
        )
    second = stage2_probability_ascent(first.matrix, cfg, problem)
    outcome = CycleOutcome(
        cycle_index,
        second.fidelity,
        second.success_probability,
        stage1_converged=True,
        stage2_feasible=second.feasible,
        stage1_iterations=first.iterations,
        stage2_iterations=second.iterations,
        matrix=second.matrix,
    )
    logger.info(
        "Cycle finished",
        extra={
            "cycle": cycle_index,
            "seed": cfg.seed,
            "fidelity": outcome.fidelity,
            "success_probability": outcome.success_probability,
            "usable": outcome.usable,
        },
    )
    return outcome


def _run_cycle_job(job: tuple[OptimizationConfig, int]) -> CycleOutcome:
    cfg, index = job
    return run_cycle(cfg, index)


def run_cycles(cfg: OptimizationConfig, workers: int | None = None) -> OptimizationResult:
    """Independent cycles from seeded starts, merged in cycle order."""
    started = time.perf_counter()
    workers = workers or cfg.workers or get_settings().workers
    jobs = [(cfg, i) for i in range(cfg.cycles)]
    logger.info(
        "Optimization started",
        extra={
            "cycles": cfg.cycles,
            "seed": cfg.seed,
            "search_space": cfg.search_space.value,
            "workers": workers,
        },
    )
    if workers > 1 and cfg.cycles > 1:
        with Pool(processes=min(workers, cfg.cycles)) as pool:
            outcomes = pool.map(_run_cycle_job, jobs)
    else:
        outcomes = [_run_cycle_job(job) for job in jobs]

    usable = [c for c in outcomes if c.usable]
    failed = len(outcomes) - len(usable)
    if failed:
        logger.warning(
            "Cycles discarded", extra={"discarded": failed, "cycles": len(outcomes)}
        )
    ordered = sorted(usable, key=lambda c: c.success_probability)
    per_cycle = [(c.fidelity, c.success_probability) for c in ordered]

    best_matrix = full_matrix = None
    best_metrics = None
    if ordered:
        top = ordered[-1]
        assert top.matrix is not None
        problem = GateProblem.from_config(cfg)
        best_matrix = ModeTransform(top.matrix)
        full_matrix = problem.full_transform(top.matrix)
        best_metrics = GateMetrics(top.fidelity, top.success_probability)

    result = OptimizationResult(
        best_matrix=best_matrix,
        metrics=best_metrics,
        per_cycle=per_cycle,
        seed=cfg.seed,
        wall_time=time.perf_counter() - started,
        config=cfg,
        cycles=list(outcomes),
        full_matrix=full_matrix,
    )
    logger.info(
        "Optimization finished",
        extra={
            "usable_cycles": result.usable_cycles,
            "best_success_probability": best_metrics.success_probability if best_metrics else None,
            "wall_time": result.wall_time,
        },
    )
    return result


def count_plateaus(values: list[float], rel_tol: float = 1e-4, min_size: int = 2) -> int:
    """Number of runs of at least ``min_size`` sorted values agreeing to ``rel_tol``."""
    ordered = sorted(values)
    plateaus = 0
    i = 0
    while i < len(ordered):
        j = i + 1
        anchor = ordered[i]
        while j < len(ordered) and ordered[j] - anchor <= rel_tol * max(abs(anchor), 1e-300):
            j += 1
        if j - i >= min_size:
            plateaus += 1
        i = j
    return plateaus
