"""
Tests for waveplate optics and state preparation.
"""

import math

import numpy as np
import pytest

from src.circuit.optics import (
    H_KET,
    V_KET,
    PreparationError,
    hwp,
    invert_preparation,
    is_unitary,
    prepare_state_jones,
    prepare_z,
    qwp,
)
from src.dynamics.point import ProjectivePoint


class TestJonesMatrices:
    """Tests for the waveplate Jones matrices."""

    @pytest.mark.parametrize("theta", [0.0, 0.3, math.pi / 8, math.pi / 4, 2.0])
    def test_waveplates_are_unitary(self, theta: float) -> None:
        """Should produce unitary matrices at any angle."""
        assert is_unitary(hwp(theta))
        assert is_unitary(qwp(theta))

    def test_hwp_at_45_swaps_polarizations(self) -> None:
        """Should turn |H> into |V> at 45 degrees."""
        assert np.allclose(hwp(math.pi / 4) @ H_KET, V_KET, atol=1e-15)

    def test_hwp_at_zero_flips_v_sign(self) -> None:
        """Should act as diag(1, -1) at 0 degrees."""
        assert np.allclose(hwp(0.0), np.diag([1, -1]))

    def test_qwp_at_zero(self) -> None:
        """Should act as diag(1, i) at 0 degrees."""
        assert np.allclose(qwp(0.0), np.diag([1, 1j]))

    def test_two_quarter_wave_plates_make_a_half_wave_plate(self) -> None:
        """Should match a HWP up to global phase."""
        theta = 0.37
        product = qwp(theta) @ qwp(theta)
        expected = hwp(theta)
        phase = product[0, 0] / expected[0, 0]

        assert abs(abs(phase) - 1) < 1e-12
        assert np.allclose(product, phase * expected, atol=1e-12)

    def test_is_unitary_rejects_non_unitary(self) -> None:
        """Should reject a scaled matrix."""
        assert not is_unitary(2 * np.eye(2))


class TestPreparation:
    """Tests for the waveplate-to-z mapping."""

    def test_no_rotation_prepares_zero(self) -> None:
        """Should leave |H> (z = 0) unchanged at zero angles."""
        assert prepare_z(0.0, 0.0) == ProjectivePoint.from_complex(0)

    def test_hwp_at_45_prepares_infinity(self) -> None:
        """Should produce |V>, the point at infinity."""
        assert prepare_z(0.0, math.pi / 4).distance(ProjectivePoint.infinity()) < 1e-15

    def test_closed_form_matches_jones_product(self) -> None:
        """Should agree with HWP . QWP . |H> on a grid of angles."""
        angles = np.linspace(0, math.pi, 13)
        for theta_q in angles:
            for theta_h in angles:
                closed = prepare_z(theta_q, theta_h)
                matrix = prepare_state_jones(theta_q, theta_h)
                assert closed.distance(matrix) < 1e-12

    def test_closed_form_matches_fraction(self) -> None:
        """Should equal [i sin 2h + sin(2h-2q)] / [i cos 2h + cos(2h-2q)]."""
        theta_q, theta_h = 0.4, 1.1
        numerator = 1j * math.sin(2 * theta_h) + math.sin(2 * theta_h - 2 * theta_q)
        denominator = 1j * math.cos(2 * theta_h) + math.cos(2 * theta_h - 2 * theta_q)

        assert prepare_z(theta_q, theta_h).z == pytest.approx(numerator / denominator, rel=1e-12)


class TestInvertPreparation:
    """Tests for recovering waveplate angles from a state."""

    @pytest.mark.parametrize(
        "z",
        [0.2, -0.2, -0.2 - 0.1j, 0.1414213562 + 0.1414213562j, 1.0, 1j, 7.5 - 3j, 0.0],
    )
    def test_round_trip(self, z: complex) -> None:
        """Should find angles that reproduce z."""
        target = ProjectivePoint.from_complex(z)
        theta_q, theta_h = invert_preparation(target)

        assert 0.0 <= theta_q < math.pi
        assert 0.0 <= theta_h < math.pi
        assert prepare_z(theta_q, theta_h).distance(target) < 1e-9

    def test_round_trip_at_infinity(self) -> None:
        """Should reach |V>."""
        target = ProjectivePoint.infinity()
        theta_q, theta_h = invert_preparation(target)

        assert prepare_z(theta_q, theta_h).distance(target) < 1e-9

    def test_random_states(self) -> None:
        """Should invert random states on the whole sphere."""
        rng = np.random.default_rng(5)
        for _ in range(20):
            z = complex(rng.normal(), rng.normal())
            target = ProjectivePoint.from_complex(z)
            theta_q, theta_h = invert_preparation(target)
            assert prepare_state_jones(theta_q, theta_h).distance(target) < 1e-9

    def test_error_type(self) -> None:
        """Should expose a dedicated exception for unreachable states."""
        assert issubclass(PreparationError, Exception)
