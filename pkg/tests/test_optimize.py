"""Tests for gate objectives, gradients and the two-stage search."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from hyper_qec.core.enums import SearchSpace
from hyper_qec.core.errors import ConfigError, DimensionError, NumericalError
from hyper_qec.gates import MeasurementScheme, TargetGate, reduced_basis
from hyper_qec.optimize import (
    GateProblem,
    OptimizationConfig,
    count_plateaus,
    gradient,
    load_config,
    objective_fidelity,
    random_start,
    run_cycles,
    stage1_fidelity_ascent,
    stage2_probability_ascent,
)


def _identity_problem() -> GateProblem:
    basis = reduced_basis()
    return GateProblem(
        basis, MeasurementScheme.default(6), TargetGate(basis, np.eye(6), name="identity")
    )


def _appendix_config(report, **kwargs) -> OptimizationConfig:
    return OptimizationConfig(
        ancilla_input=tuple(report.resolved_scheme["ancilla_input"]),
        herald_pattern=tuple(report.resolved_scheme["herald_pattern"]),
        spectator_phases=dict(report.spectator_phases),
        **kwargs,
    )


def _random_matrix(rng: np.random.Generator, m: int) -> np.ndarray:
    return (rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))) / np.sqrt(2)


def _relative_error(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


class TestObjective:
    def test_identity_is_not_the_gate(self) -> None:
        assert objective_fidelity(np.eye(6), OptimizationConfig()) < 1

    def test_appendix_block(self, appendix_report) -> None:
        cfg = _appendix_config(appendix_report)
        assert objective_fidelity(appendix_report.active_block, cfg) >= 1 - 1e-6

    def test_reduced_and_full_agree_on_appendix(self, appendix_report) -> None:
        reduced = GateProblem.from_config(_appendix_config(appendix_report))
        full = GateProblem.from_config(
            _appendix_config(appendix_report, search_space=SearchSpace.FULL)
        )
        block = appendix_report.active_block
        a = reduced.metrics(block)
        b = full.metrics(reduced.full_transform(block))
        assert a.fidelity == pytest.approx(b.fidelity, abs=1e-9)
        assert a.success_probability == pytest.approx(b.success_probability, rel=1e-9)

    def test_dimension_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            objective_fidelity(np.eye(9), OptimizationConfig())

    def test_zero_matrix(self) -> None:
        ev = GateProblem.from_config(OptimizationConfig()).evaluate(np.zeros((6, 6)), gradient=True)
        assert (ev.fidelity, ev.success_probability) == (0.0, 0.0)
        assert ev.fidelity_gradient is not None
        assert not ev.fidelity_gradient.any()


class TestGradient:
    """Analytic gradients against central finite differences."""

    def test_constant_objective(self, rng: np.random.Generator) -> None:
        g = gradient(lambda m: 3.0, _random_matrix(rng, 4))
        assert not g.any()

    def test_linear_objective(self) -> None:
        c = np.array([[1 + 2j, -0.5j], [0.25, 3]])
        g = gradient(lambda m: float(np.real(np.vdot(c, m))), np.zeros((2, 2)))
        np.testing.assert_allclose(g, c, atol=1e-8)

    def test_non_finite_objective(self) -> None:
        with pytest.raises(NumericalError):
            gradient(lambda m: float("nan"), np.eye(2))

    @pytest.mark.parametrize("space", [SearchSpace.REDUCED, SearchSpace.FULL])
    def test_analytic_matches_finite_differences(
        self, rng: np.random.Generator, space: SearchSpace
    ) -> None:
        cfg = OptimizationConfig(search_space=space)
        problem = GateProblem.from_config(cfg)
        m = _random_matrix(rng, cfg.mode_count)
        ev = problem.evaluate(m, gradient=True)
        fd_fid = gradient(lambda x: problem.evaluate(x).fidelity, m)
        fd_prob = gradient(lambda x: problem.evaluate(x).success_probability, m)
        assert _relative_error(ev.fidelity_gradient, fd_fid) < 1e-5
        assert _relative_error(ev.probability_gradient, fd_prob) < 1e-5

    def test_spectator_phases_enter_gradient(self, rng: np.random.Generator) -> None:
        cfg = OptimizationConfig(spectator_phases={"H↺_A1": np.exp(0.8j), "H_A": -1})
        problem = GateProblem.from_config(cfg)
        m = _random_matrix(rng, 6)
        ev = problem.evaluate(m, gradient=True)
        fd = gradient(lambda x: problem.evaluate(x).fidelity, m)
        assert _relative_error(ev.fidelity_gradient, fd) < 1e-5

    def test_vanishes_at_unit_fidelity(self) -> None:
        problem = _identity_problem()
        ev = problem.evaluate(np.eye(6), gradient=True)
        assert ev.fidelity == pytest.approx(1.0)
        assert np.linalg.norm(ev.fidelity_gradient) < 1e-4
        fd = gradient(lambda x: problem.evaluate(x).fidelity, np.eye(6))
        assert np.linalg.norm(fd) < 1e-4


class TestStage1:
    def test_exact_start_returns_immediately(self) -> None:
        out = stage1_fidelity_ascent(np.eye(6), OptimizationConfig(), _identity_problem())
        assert out.converged
        assert out.iterations == 0

    def test_perturbed_appendix_block_converges(
        self, appendix_report, rng: np.random.Generator
    ) -> None:
        cfg = _appendix_config(appendix_report)
        start = appendix_report.active_block + 1e-3 * _random_matrix(rng, 6)
        out = stage1_fidelity_ascent(start, cfg)
        assert out.converged
        assert out.fidelity >= 1 - 1e-7

    def test_fidelity_never_decreases(self, rng: np.random.Generator) -> None:
        cfg = OptimizationConfig(stage1_max_iterations=200)
        out = stage1_fidelity_ascent(_random_matrix(rng, 6), cfg)
        fidelities = [f for f, _ in out.history]
        assert all(b >= a for a, b in zip(fidelities, fidelities[1:], strict=False))
        assert len(out.history) == out.iterations + 1

    def test_iteration_limit_is_a_flag(self, rng: np.random.Generator) -> None:
        cfg = OptimizationConfig(stage1_max_iterations=1)
        out = stage1_fidelity_ascent(_random_matrix(rng, 6), cfg)
        assert not out.converged
        assert out.iterations <= 1


class TestStage2:
    def test_stays_feasible(self, appendix_report) -> None:
        cfg = _appendix_config(appendix_report, stage2_max_iterations=200)
        start = stage1_fidelity_ascent(appendix_report.active_block, cfg)
        assert start.converged
        out = stage2_probability_ascent(start.matrix, cfg)
        assert out.feasible
        assert out.fidelity >= cfg.fidelity_threshold
        assert out.success_probability >= start.success_probability - 1e-12

    def test_probability_monotone_while_feasible(self, appendix_report) -> None:
        cfg = _appendix_config(appendix_report, stage2_max_iterations=200)
        start = stage1_fidelity_ascent(appendix_report.active_block, cfg)
        out = stage2_probability_ascent(start.matrix, cfg)
        thr = cfg.fidelity_threshold
        for (f0, p0), (f1, p1) in zip(out.history, out.history[1:], strict=False):
            if f0 >= thr and f1 >= thr:
                assert p1 >= p0

    def test_every_iterate_is_feasible(self, appendix_report) -> None:
        cfg = _appendix_config(appendix_report, stage2_max_iterations=200)
        start = stage1_fidelity_ascent(appendix_report.active_block, cfg)
        out = stage2_probability_ascent(start.matrix, cfg)
        assert all(f >= cfg.fidelity_threshold for f, _ in out.history)

    def test_leaves_the_threshold_boundary(self) -> None:
        """Stage 1 stops right at F = threshold; stage 2 must still climb P from there."""
        cfg = OptimizationConfig(fidelity_threshold=0.99, stage2_max_iterations=500)
        problem = GateProblem.from_config(cfg)
        start = stage1_fidelity_ascent(random_start(cfg, 0), cfg, problem)
        assert start.converged
        out = stage2_probability_ascent(start.matrix, cfg, problem)
        assert out.feasible
        assert out.fidelity >= 0.99
        assert out.success_probability >= 1.5 * start.success_probability

    def test_infeasible_start_is_restored(self, appendix_report, rng: np.random.Generator) -> None:
        cfg = _appendix_config(
            appendix_report, stage2_max_iterations=50, restore_max_iterations=20000
        )
        start = appendix_report.active_block + 1e-3 * _random_matrix(rng, 6)
        problem = GateProblem.from_config(cfg)
        assert problem.evaluate(start).fidelity < cfg.fidelity_threshold
        out = stage2_probability_ascent(start, cfg, problem)
        assert out.feasible
        assert out.fidelity >= cfg.fidelity_threshold

    def test_local_optimum_is_kept(self) -> None:
        """The identity target is met with P = 1, so nothing can improve it."""
        cfg = OptimizationConfig()
        out = stage2_probability_ascent(np.eye(6), cfg, _identity_problem())
        assert out.feasible
        assert out.success_probability == pytest.approx(1.0)

    @pytest.mark.slow
    def test_reaches_published_probability(self, appendix_report) -> None:
        cfg = _appendix_config(appendix_report)
        start = stage1_fidelity_ascent(appendix_report.active_block, cfg)
        out = stage2_probability_ascent(start.matrix, cfg)
        assert out.success_probability == pytest.approx(0.0097, abs=5e-4)


class TestRunCycles:
    def _quick(self, **kwargs) -> OptimizationConfig:
        base = dict(cycles=2, seed=7, stage1_max_iterations=150, stage2_max_iterations=30)
        base.update(kwargs)
        return OptimizationConfig(**base)

    def test_deterministic(self) -> None:
        cfg = self._quick(cycles=1)
        a = run_cycles(cfg, workers=1)
        b = run_cycles(cfg, workers=1)
        assert a.as_dict() == b.as_dict()
        assert [c.as_dict() for c in a.cycles] == [c.as_dict() for c in b.cycles]

    def test_parallel_matches_serial(self) -> None:
        cfg = self._quick()
        serial = run_cycles(cfg, workers=1)
        parallel = run_cycles(cfg, workers=2)
        assert serial.as_dict() == parallel.as_dict()

    def test_distribution_is_sorted_and_feasible(self) -> None:
        cfg = self._quick(cycles=3)
        result = run_cycles(cfg, workers=1)
        probs = [p for _, p in result.per_cycle]
        assert probs == sorted(probs)
        assert all(f >= cfg.fidelity_threshold for f, _ in result.per_cycle)
        assert len(result.cycles) == 3
        assert result.failed == (result.usable_cycles == 0)

    @pytest.mark.slow
    def test_random_starts_find_solutions(self) -> None:
        cfg = OptimizationConfig(cycles=50, seed=1, stage2_max_iterations=1)
        result = run_cycles(cfg)
        assert sum(c.stage1_converged for c in result.cycles) >= 1

    @pytest.mark.slow
    def test_desk_scale_distribution(self) -> None:
        result = run_cycles(OptimizationConfig(cycles=200, seed=0))
        assert not result.failed
        assert result.metrics.success_probability >= 0.0092
        assert result.plateaus >= 2
        sv = sorted(result.singular_values)
        np.testing.assert_allclose(sv, [0.5, 1, 1, 1, 1, 1], atol=1e-2)

    @pytest.mark.slow
    def test_relaxed_threshold(self) -> None:
        result = run_cycles(OptimizationConfig(cycles=200, seed=0, fidelity_threshold=0.99))
        assert result.metrics.success_probability == pytest.approx(0.011, abs=1e-3)


class TestCountPlateaus:
    def test_groups(self) -> None:
        values = [0.0050, 0.00500001, 0.0071, 0.00974, 0.0097400001, 0.0097400002]
        assert count_plateaus(values, rel_tol=1e-4) == 2

    def test_singletons_do_not_count(self) -> None:
        assert count_plateaus([0.001, 0.002, 0.003]) == 0
        assert count_plateaus([]) == 0

    def test_min_size(self) -> None:
        assert count_plateaus([0.1, 0.1, 0.2], min_size=3) == 0


class TestOptimizationConfig:
    def test_defaults(self) -> None:
        cfg = OptimizationConfig()
        assert cfg.mode_count == 6
        assert cfg.fidelity_threshold == pytest.approx(1 - 1e-7)
        assert OptimizationConfig(search_space="full").mode_count == 9

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"fidelity_threshold": 1.0},
            {"fidelity_threshold": 0.0},
            {"cycles": 0},
            {"target": "cnot"},
            {"search_space": "huge"},
            {"ancilla_input": (1, 1), "herald_pattern": (1, 1, 1)},
            {"ancilla_input": (2, 0, 0), "herald_pattern": (1, 0, 0)},
            {"spectator_phases": {"V_A": 1}},
            {"stage2_boundary_margin": -0.1},
            {"restore_max_iterations": 0},
        ],
    )
    def test_invalid(self, kwargs: dict) -> None:
        with pytest.raises(ConfigError):
            OptimizationConfig(**kwargs)

    def test_load_yaml(self, tmp_path: Path) -> None:
        path = tmp_path / "run.yaml"
        path.write_text(
            "search_space: full\n"
            "cycles: 5\n"
            "seed: 11\n"
            "fidelity_threshold: 0.99\n"
            "spectator_phases:\n"
            "  H↺_A1: [0.0, 1.0]\n",
            encoding="utf-8",
        )
        cfg = load_config(path)
        assert cfg.search_space is SearchSpace.FULL
        assert (cfg.cycles, cfg.seed) == (5, 11)
        assert cfg.spectator_phases["H↺_A1"] == 1j
        assert cfg.spectator_phases["H_A"] == 1

    def test_unknown_key(self, tmp_path: Path) -> None:
        path = tmp_path / "run.yaml"
        path.write_text("cycels: 5\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="cycels"):
            load_config(path)

    def test_overrides_and_echo(self) -> None:
        cfg = OptimizationConfig().with_overrides(cycles=3, seed=None)
        assert cfg.cycles == 3
        assert cfg.seed == 0
        echoed = cfg.as_dict()
        assert echoed["search_space"] == "reduced"
        assert echoed["spectator_phases"]["H_A"] == [1.0, 0.0]
        assert OptimizationConfig(**{**echoed, "spectator_phases": {}}).cycles == 3

    @pytest.mark.parametrize(
        "name", ["optimize_reduced.yaml", "optimize_full.yaml", "optimize_relaxed.yaml"]
    )
    def test_shipped_configs_load(self, name: str) -> None:
        path = Path(__file__).resolve().parent.parent / "configs" / name
        assert load_config(path).cycles >= 1
