"""Tests for Fock states, transition amplitudes, evolution and postselection."""

from __future__ import annotations

from math import comb

import numpy as np
import pytest

from hyper_qec.core.errors import DimensionError
from hyper_qec.fock import (
    FockBasisState,
    ModeTransform,
    PhotonicState,
    apply_transform,
    enumerate_basis,
    postselect,
    transition_amplitude,
    transition_gradient,
)


class TestEnumerateBasis:
    """Deterministic lexicographic-descending basis order."""

    def test_two_modes_one_photon(self) -> None:
        assert enumerate_basis(2, 1) == [FockBasisState.of(1, 0), FockBasisState.of(0, 1)]

    def test_quad_rail_single_photon(self) -> None:
        states = enumerate_basis(4, 1)
        assert [s.occupations for s in states] == [
            (1, 0, 0, 0),
            (0, 1, 0, 0),
            (0, 0, 1, 0),
            (0, 0, 0, 1),
        ]

    def test_three_modes_three_photons(self) -> None:
        states = enumerate_basis(3, 3)
        assert len(states) == 10
        assert states[0].occupations == (3, 0, 0)
        assert states[-1].occupations == (0, 0, 3)

    @pytest.mark.parametrize("modes,photons", [(1, 0), (4, 3), (6, 2), (9, 5)])
    def test_count(self, modes: int, photons: int) -> None:
        states = enumerate_basis(modes, photons)
        assert len(states) == comb(photons + modes - 1, modes - 1)
        assert len(set(states)) == len(states)
        assert all(s.photon_count == photons for s in states)

    def test_invalid_arguments(self) -> None:
        with pytest.raises(ValueError):
            enumerate_basis(0, 1)
        with pytest.raises(ValueError):
            enumerate_basis(2, -1)


class TestFockBasisState:
    def test_negative_occupation_rejected(self) -> None:
        with pytest.raises(ValueError):
            FockBasisState.of(1, -1)

    def test_equality_is_elementwise(self) -> None:
        assert FockBasisState.of(1, 0, 2) == FockBasisState((1, 0, 2))
        assert FockBasisState.of(1, 0, 2) != FockBasisState.of(1, 2, 0)


class TestTransitionAmplitude:
    def test_hong_ou_mandel_dip(self, beamsplitter: np.ndarray) -> None:
        assert abs(transition_amplitude(beamsplitter, (1, 1), (1, 1))) < 1e-15

    def test_bunched_outputs(self, beamsplitter: np.ndarray) -> None:
        assert transition_amplitude(beamsplitter, (1, 1), (2, 0)) == pytest.approx(
            1 / np.sqrt(2)
        )
        assert transition_amplitude(beamsplitter, (1, 1), (0, 2)) == pytest.approx(
            -1 / np.sqrt(2)
        )

    def test_identity(self) -> None:
        t = ModeTransform.identity(4)
        assert transition_amplitude(t, (2, 0, 1, 1), (2, 0, 1, 1)) == pytest.approx(1)

    def test_photon_number_mismatch_is_zero(self) -> None:
        assert transition_amplitude(np.eye(3), (1, 0, 0), (1, 1, 0)) == 0

    def test_mode_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            transition_amplitude(np.eye(3), (1, 0), (1, 0))

    def test_unitary_outputs_normalized(self, haar) -> None:
        u = haar(3, seed=3)
        total = sum(
            abs(transition_amplitude(u, (2, 1, 0), out)) ** 2 for out in enumerate_basis(3, 3)
        )
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_gradient_matches_finite_difference(self, rng: np.random.Generator) -> None:
        t = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        inp, out = (2, 1, 0, 1), (0, 1, 2, 1)
        value, grad = transition_gradient(t, inp, out)
        assert value == pytest.approx(transition_amplitude(t, inp, out))
        h = 1e-6
        for j in range(4):
            for l in range(4):
                bump = np.zeros((4, 4), dtype=complex)
                bump[j, l] = h
                fd = (
                    transition_amplitude(t + bump, inp, out)
                    - transition_amplitude(t - bump, inp, out)
                ) / (2 * h)
                assert grad[j, l] == pytest.approx(fd, rel=1e-6, abs=1e-8)


class TestApplyTransform:
    def test_identity_keeps_state(self) -> None:
        s = PhotonicState(
            {FockBasisState.of(1, 1, 0): 0.6, FockBasisState.of(0, 1, 1): 0.8j}, 3
        )
        out = apply_transform(ModeTransform.identity(3), s)
        assert out.amplitude((1, 1, 0)) == pytest.approx(0.6)
        assert out.amplitude((0, 1, 1)) == pytest.approx(0.8j)
        assert len(out) == 2

    def test_beamsplitter_on_two_photons(self, beamsplitter: np.ndarray) -> None:
        out = apply_transform(beamsplitter, PhotonicState.basis((1, 1)))
        assert out.amplitude((2, 0)) == pytest.approx(1 / np.sqrt(2))
        assert out.amplitude((0, 2)) == pytest.approx(-1 / np.sqrt(2))
        assert (1, 1) not in [s.occupations for s in out.terms]

    def test_norm_and_photon_number_conserved(self, haar) -> None:
        u = haar(4, seed=11)
        s = PhotonicState(
            {FockBasisState.of(2, 1, 0, 0): 0.8, FockBasisState.of(0, 1, 1, 1): 0.6j}, 4
        )
        out = apply_transform(u, s)
        assert out.norm_squared == pytest.approx(1.0, abs=1e-10)
        assert out.photon_numbers == {3}

    def test_composition(self, haar) -> None:
        u1, u2 = haar(4, seed=1), haar(4, seed=2)
        s = PhotonicState.basis((1, 0, 2, 0))
        two_step = apply_transform(u2, apply_transform(u1, s))
        one_step = apply_transform(ModeTransform(u2).compose(ModeTransform(u1)), s)
        for state in enumerate_basis(4, 3):
            assert abs(two_step.amplitude(state) - one_step.amplitude(state)) < 1e-9

    def test_matches_pairwise_amplitudes(self, appendix_matrix: np.ndarray) -> None:
        inp = FockBasisState.of(0, 1, 0, 0, 0, 1, 1, 1, 1)
        out = apply_transform(appendix_matrix, PhotonicState.basis(inp.occupations))
        for state in enumerate_basis(9, 5)[::37]:
            expected = transition_amplitude(appendix_matrix, inp, state)
            if abs(expected) < 1e-14:
                continue
            assert out.amplitude(state) == pytest.approx(expected, abs=1e-13)

    def test_mode_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            apply_transform(np.eye(2), PhotonicState.basis((1, 0, 0)))


class TestPostselect:
    def test_no_match_gives_zero_state(self) -> None:
        out = postselect(PhotonicState.basis((1, 1)), [1], [2])
        assert len(out) == 0
        assert out.mode_count == 1

    def test_strips_ancilla(self) -> None:
        out = postselect(PhotonicState.basis((1, 1)), [1], [1])
        assert out.mode_count == 1
        assert out.amplitude((1,)) == 1

    def test_result_is_subnormalized(self, beamsplitter: np.ndarray) -> None:
        evolved = apply_transform(beamsplitter, PhotonicState.basis((1, 1)))
        heralded = postselect(evolved, [1], [0])
        assert heralded.norm_squared == pytest.approx(0.5)

    def test_pattern_length_checked(self) -> None:
        with pytest.raises(DimensionError):
            postselect(PhotonicState.basis((1, 1, 0)), [1, 2], [1])
