"""Tests for contraction maps and gate scores."""

from __future__ import annotations

import numpy as np
import pytest

from hyper_qec.core.errors import DimensionError
from hyper_qec.fock import FockBasisState, PhotonicState, apply_transform, postselect
from hyper_qec.gates import (
    KNILL_COMBINATION_PROBABILITY,
    ContractionMap,
    MeasurementScheme,
    contraction_map,
    embed_reduced_block,
    lift_reduced_to_full,
    metrics,
    quad_rail_basis,
    reduced_basis,
    target_csign,
)
from hyper_qec.gates.targets import LogicalBasis


def _one_photon_basis(modes: int) -> LogicalBasis:
    states = tuple(
        FockBasisState(tuple(1 if k == i else 0 for k in range(modes))) for i in range(modes)
    )
    return LogicalBasis(tuple(f"m{i}" for i in range(modes)), states, tuple(f"m{i}" for i in range(modes)))


class TestMeasurementScheme:
    def test_default_scheme(self) -> None:
        scheme = MeasurementScheme.default(9)
        assert scheme.ancilla_modes == (6, 7, 8)
        assert scheme.ancilla_input == (1, 1, 1)
        assert scheme.herald_pattern == (1, 1, 1)
        assert scheme.computational_modes(9) == (0, 1, 2, 3, 4, 5)

    def test_length_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            MeasurementScheme((6, 7), (1, 1), (1,))


class TestContractionMap:
    def test_identity_transform(self) -> None:
        a = contraction_map(np.eye(9), quad_rail_basis())
        np.testing.assert_allclose(a.matrix, np.eye(8))
        assert a.photon_numbers == (5,) * 8

    def test_matches_evolve_then_postselect(self, haar) -> None:
        t = haar(4, seed=5) * 0.9
        basis = _one_photon_basis(3)
        scheme = MeasurementScheme((3,), (1,), (1,))
        a = contraction_map(t, basis, scheme)
        for i, state in enumerate(basis.states):
            full_in = scheme.place(state, 4, scheme.ancilla_input)
            evolved = apply_transform(t, PhotonicState.basis(full_in.occupations))
            heralded = postselect(evolved, scheme.ancilla_modes, scheme.herald_pattern)
            for j, out in enumerate(basis.states):
                assert abs(a.matrix[j, i] - heralded.amplitude(out)) < 1e-10

    def test_basis_mode_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            contraction_map(np.eye(8), quad_rail_basis())


class TestMetrics:
    def test_exact_target(self) -> None:
        target = target_csign()
        m = metrics(ContractionMap(target.basis, target.matrix), target)
        assert m.fidelity == pytest.approx(1.0)
        assert m.success_probability == pytest.approx(1.0)

    def test_half_target(self) -> None:
        target = target_csign()
        m = metrics(ContractionMap(target.basis, 0.5 * target.matrix), target)
        assert m.fidelity == pytest.approx(1.0)
        assert m.success_probability == pytest.approx(0.25)

    def test_zero_map(self) -> None:
        target = target_csign()
        m = metrics(ContractionMap(target.basis, np.zeros((8, 8))), target)
        assert (m.fidelity, m.success_probability) == (0.0, 0.0)

    def test_phase_invariance_and_scaling(self, rng: np.random.Generator) -> None:
        target = target_csign()
        a = ContractionMap(target.basis, rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8)))
        base = metrics(a, target)
        rotated = metrics(a.scaled(np.exp(0.7j)), target)
        shrunk = metrics(a.scaled(0.3), target)
        assert rotated.fidelity == pytest.approx(base.fidelity, rel=1e-12)
        assert rotated.success_probability == pytest.approx(base.success_probability, rel=1e-12)
        assert shrunk.fidelity == pytest.approx(base.fidelity, rel=1e-12)
        assert shrunk.success_probability == pytest.approx(0.09 * base.success_probability)

    def test_physical_rescaling(self) -> None:
        """Doubling the transform leaves the rescaled map unchanged."""
        a1 = contraction_map(np.eye(9), quad_rail_basis())
        a2 = contraction_map(2 * np.eye(9), quad_rail_basis())
        np.testing.assert_allclose(a2.rescaled(), a1.rescaled())

    def test_basis_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            metrics(ContractionMap(reduced_basis(), np.eye(6)), target_csign())


class TestAppendixMaps:
    def test_appendix_map_proportional_to_csign(self, appendix_report) -> None:
        a = contraction_map(
            appendix_report.canonical_matrix, quad_rail_basis(), appendix_report.scheme
        )
        m = metrics(a, target_csign())
        assert m.fidelity >= 1 - 1e-6
        assert m.success_probability == pytest.approx(0.00974276, abs=1e-4)
        assert m.success_probability > KNILL_COMBINATION_PROBABILITY

    def test_lifted_block_matches_direct_evaluation(self, appendix_report) -> None:
        scheme = appendix_report.scheme
        direct = metrics(
            contraction_map(appendix_report.canonical_matrix, quad_rail_basis(), scheme),
            target_csign(),
        )
        reduced_scheme = MeasurementScheme.with_patterns(
            6, scheme.ancilla_input, scheme.herald_pattern
        )
        red = contraction_map(appendix_report.active_block, reduced_basis(), reduced_scheme)
        lifted_map = lift_reduced_to_full(red, appendix_report.spectator_phases)
        lifted = metrics(lifted_map, target_csign())
        assert lifted.fidelity == pytest.approx(direct.fidelity, abs=1e-9)
        assert lifted.success_probability == pytest.approx(direct.success_probability, rel=1e-9)
        embedded = embed_reduced_block(
            appendix_report.active_block, appendix_report.spectator_phases
        )
        normalized = metrics(contraction_map(embedded, quad_rail_basis(), scheme), target_csign())
        assert lifted.fidelity == pytest.approx(normalized.fidelity, abs=1e-9)
        assert lifted.success_probability == pytest.approx(
            normalized.success_probability, rel=1e-9
        )

    def test_lift_rescales_by_full_photon_count(self, appendix_report) -> None:
        scheme = appendix_report.scheme
        reduced_scheme = MeasurementScheme.with_patterns(
            6, scheme.ancilla_input, scheme.herald_pattern
        )
        red = contraction_map(appendix_report.active_block, reduced_basis(), reduced_scheme)
        assert len(set(red.photon_numbers)) > 1
        lifted = lift_reduced_to_full(red, appendix_report.spectator_phases)
        assert lifted.photon_numbers == (5,) * 8
        direct = contraction_map(appendix_report.canonical_matrix, quad_rail_basis(), scheme)
        assert lifted.sigma_max == pytest.approx(direct.sigma_max, rel=1e-12)
        np.testing.assert_allclose(lifted.rescaled(), direct.rescaled(), atol=1e-12)

    def test_embedding_matches_lift(self, rng: np.random.Generator) -> None:
        block = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        phases = {"H↺_A1": np.exp(1.1j), "H↻_A1": np.exp(-0.4j)}
        red = contraction_map(block, reduced_basis(), MeasurementScheme.default(6))
        lifted = metrics(lift_reduced_to_full(red, phases), target_csign())
        direct = metrics(
            contraction_map(embed_reduced_block(block, phases), quad_rail_basis()),
            target_csign(),
        )
        assert lifted.fidelity == pytest.approx(direct.fidelity, rel=1e-9)
        assert lifted.success_probability == pytest.approx(direct.success_probability, rel=1e-9)
