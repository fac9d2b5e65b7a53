"""
Tests for the two-qubit realization of the protocol step.
"""

import numpy as np
import pytest

from src.circuit.optics import is_unitary
from src.circuit.protocol import (
    U_CNOT,
    U_TILDE,
    QubitState,
    TwoQubitState,
    apply_protocol_step,
    build_cnot_waveplates,
    build_u,
    build_u_decomposed,
    build_u_tilde_waveplates,
    entangled_state,
    product_state,
    run_protocol,
)
from src.dynamics.nonlinear_map import map_step, success_probability
from src.dynamics.point import ProjectivePoint


class TestUnitaries:
    """Tests for U, U_tilde and U_CNOT."""

    @pytest.mark.parametrize("matrix", [build_u(), U_TILDE, U_CNOT])
    def test_are_unitary(self, matrix: np.ndarray) -> None:
        """Should satisfy U^dagger U = I."""
        assert is_unitary(matrix)

    def test_decomposition_identity(self) -> None:
        """Should rebuild U from U_CNOT^dagger U_tilde U_CNOT entry-wise."""
        assert np.max(np.abs(build_u_decomposed() - build_u())) <= 1e-14

    def test_u_tilde_from_waveplates(self) -> None:
        """Should match U_tilde when built from the two mode-dependent HWPs."""
        assert np.allclose(build_u_tilde_waveplates(), U_TILDE, atol=1e-14)

    def test_cnot_from_waveplates(self) -> None:
        """Should match U_CNOT when built from the controlled HWP."""
        assert np.allclose(build_cnot_waveplates(), U_CNOT, atol=1e-15)


class TestStates:
    """Tests for single- and two-qubit state containers."""

    def test_qubit_state_rejects_unnormalized(self) -> None:
        """Should refuse amplitudes that are not normalized."""
        with pytest.raises(ValueError):
            QubitState(1.0, 1.0)

    def test_qubit_state_from_vector_normalizes(self) -> None:
        """Should normalize a non-zero vector."""
        state = QubitState.from_vector(np.array([3.0, 4.0j]))

        assert abs(state.a0) == pytest.approx(0.6)
        assert abs(state.a1) == pytest.approx(0.8)

    def test_qubit_state_from_zero_vector(self) -> None:
        """Should refuse the zero vector."""
        with pytest.raises(ValueError):
            QubitState.from_vector(np.zeros(2))

    def test_two_qubit_state_is_read_only(self) -> None:
        """Should freeze its amplitude array."""
        state = TwoQubitState(np.array([1, 0, 0, 0], dtype=np.complex128))

        with pytest.raises(ValueError):
            state.amplitudes[0] = 0

    def test_two_qubit_state_rejects_unnormalized(self) -> None:
        """Should refuse a vector of norm 2."""
        with pytest.raises(ValueError):
            TwoQubitState(np.array([2, 0, 0, 0], dtype=np.complex128))

    def test_product_state(self) -> None:
        """Should be the tensor square of the single-qubit state."""
        p = ProjectivePoint.from_complex(0.2)
        expected = np.array([1, 0.2, 0.2, 0.04]) / 1.04

        assert np.allclose(product_state(p).amplitudes, expected, atol=1e-15)

    def test_entangled_state_shape(self) -> None:
        """Should be proportional to (1 + z^2, 0, 2z, 1 - z^2)."""
        z = -0.2 - 0.1j
        psi = entangled_state(ProjectivePoint.from_complex(z)).amplitudes
        expected = np.array([1 + z * z, 0, 2 * z, 1 - z * z])
        expected = expected / np.linalg.norm(expected)
        phase = psi[0] / expected[0]

        assert abs(psi[1]) < 1e-15
        assert np.allclose(psi, phase * expected, atol=1e-12)


class TestProtocolStep:
    """Tests for the post-selected protocol step."""

    def test_selected_branch_matches_map(self) -> None:
        """Should reproduce map_step and its probability on random states."""
        rng = np.random.default_rng(17)
        zs = rng.normal(size=10_000) + 1j * rng.normal(size=10_000)

        for z in zs:
            p = ProjectivePoint.from_complex(z)
            outcome = apply_protocol_step(p)
            assert outcome.selected_point.distance(map_step(p)) < 1e-12
            assert abs(outcome.selected_probability - success_probability(p)) < 1e-12

    def test_probabilities_sum_to_one(self) -> None:
        """Should split the norm between the two branches."""
        outcome = apply_protocol_step(ProjectivePoint.from_complex(0.3 - 0.7j))

        assert outcome.selected_probability + outcome.rejected_probability == pytest.approx(1.0)

    def test_rejected_branch_is_v(self) -> None:
        """Should leave |1> in the discarded branch."""
        outcome = apply_protocol_step(ProjectivePoint.from_complex(0.4 + 0.1j))

        assert outcome.rejected_state.to_point().distance(ProjectivePoint.infinity()) < 1e-15

    def test_fixed_point_always_succeeds(self) -> None:
        """Should succeed with certainty at z = 1."""
        outcome = apply_protocol_step(ProjectivePoint.from_complex(1))

        assert outcome.selected_probability == pytest.approx(1.0, abs=1e-15)
        assert outcome.rejected_probability == pytest.approx(0.0, abs=1e-15)

    def test_poles_land_on_infinity(self) -> None:
        """Should produce |1> at z = i with probability 1/2."""
        outcome = apply_protocol_step(ProjectivePoint.from_complex(1j))

        assert outcome.selected_point.distance(ProjectivePoint.infinity()) < 1e-15
        assert outcome.selected_probability == pytest.approx(0.5)

    def test_run_protocol_follows_the_map(self) -> None:
        """Should chain steps along the map trajectory."""
        p = ProjectivePoint.from_complex(0.2)
        outcomes = run_protocol(p, 4)

        current = p
        for outcome in outcomes:
            current = map_step(current)
            assert outcome.selected_point.distance(current) < 1e-12
        assert len(outcomes) == 4

    def test_run_protocol_rejects_negative_steps(self) -> None:
        """Should refuse n < 0."""
        with pytest.raises(ValueError):
            run_protocol(ProjectivePoint.from_complex(0.2), -1)

