"""
Tests for projective points.
"""

import cmath
import math

import pytest

from src.dynamics.point import EQUALITY_TOL, ProjectivePoint, chordal_distance


class TestConstruction:
    """Tests for normalization and the canonical phase."""

    def test_normalizes_coordinates(self) -> None:
        """Should scale the pair to unit norm."""
        p = ProjectivePoint(3.0, 4.0)

        assert abs(p.alpha) ** 2 + abs(p.beta) ** 2 == pytest.approx(1.0, abs=1e-15)
        assert p.z == pytest.approx(4.0 / 3.0)

    def test_alpha_is_real_and_non_negative(self) -> None:
        """Should rotate the global phase so alpha is real."""
        p = ProjectivePoint(1j, 1.0)

        assert p.alpha.imag == 0.0
        assert p.alpha.real > 0
        assert p.z == pytest.approx(-1j)

    def test_rejects_zero_pair(self) -> None:
        """Should refuse (0, 0)."""
        with pytest.raises(ValueError):
            ProjectivePoint(0.0, 0.0)

    def test_rejects_non_finite_coordinates(self) -> None:
        """Should refuse NaN or infinite coordinates."""
        with pytest.raises(ValueError):
            ProjectivePoint(float("nan"), 1.0)
        with pytest.raises(ValueError):
            ProjectivePoint(1.0, complex(math.inf, 0))

    def test_from_complex_round_trips_z(self) -> None:
        """Should recover z from from_complex."""
        z = -0.2 - 0.1j

        assert ProjectivePoint.from_complex(z).z == pytest.approx(z, abs=1e-15)

    def test_from_complex_rejects_nan(self) -> None:
        """Should refuse NaN."""
        with pytest.raises(ValueError):
            ProjectivePoint.from_complex(complex(math.nan, 0))


class TestInfinity:
    """Tests for the point at infinity."""

    def test_infinity_is_the_one_state(self) -> None:
        """Should store infinity as (0, 1)."""
        p = ProjectivePoint.infinity()

        assert p.is_infinite
        assert p.alpha == 0
        assert p.beta == 1

    def test_infinite_z_maps_to_infinity(self) -> None:
        """Should accept an infinite complex number."""
        p = ProjectivePoint.from_complex(complex(math.inf, 0))

        assert p.is_infinite
        assert cmath.isinf(p.z)

    def test_infinity_phase_is_canonical(self) -> None:
        """Should give the same coordinates for any phase of |1>."""
        p = ProjectivePoint(0.0, -1j)

        assert p.beta == 1


class TestDistanceAndEquality:
    """Tests for the chordal metric."""

    def test_distance_is_zero_for_equal_points(self) -> None:
        """Should vanish for projectively equal points."""
        p = ProjectivePoint(1.0, 0.5 + 0.5j)
        q = ProjectivePoint(2j, 1j - 1)

        assert p.distance(q) < 1e-15
        assert p == q

    def test_distance_of_antipodes_is_one(self) -> None:
        """Should reach 1 for orthogonal states."""
        assert ProjectivePoint.from_complex(0).distance(ProjectivePoint.infinity()) == 1.0

    def test_chordal_distance_matches_method(self) -> None:
        """Should agree with the free function."""
        p = ProjectivePoint.from_complex(0.3 - 0.1j)
        q = ProjectivePoint.from_complex(-1.2j)

        assert p.distance(q) == chordal_distance(p.alpha, p.beta, q.alpha, q.beta)

    def test_equality_uses_tolerance(self) -> None:
        """Should treat points closer than EQUALITY_TOL as equal."""
        p = ProjectivePoint.from_complex(0.2)

        assert p == ProjectivePoint.from_complex(0.2 + EQUALITY_TOL / 10)
        assert p != ProjectivePoint.from_complex(0.2 + 1e-6)

    def test_equality_follows_environment_tolerance(
        self, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """Should compare with NLQ_EQUALITY_TOL when it is set."""
        p = ProjectivePoint.from_complex(0.2)
        q = ProjectivePoint.from_complex(0.20001)
        assert p != q

        monkeypatch.setenv("NLQ_EQUALITY_TOL", "1e-3")

        assert p == q
        assert p.is_close(q)
        assert not p.is_close(q, tol=1e-9)

    def test_points_are_unhashable(self) -> None:
        """Should not be usable as dict keys since equality is approximate."""
        with pytest.raises(TypeError):
            hash(ProjectivePoint.from_complex(1))


class TestAntipode:
    """Tests for the orthogonal state."""

    @pytest.mark.parametrize("z", [0.2, -0.2 - 0.1j, 3j, 0])
    def test_antipode_is_orthogonal(self, z: complex) -> None:
        """Should map z to -1/conj(z) at chordal distance 1."""
        p = ProjectivePoint.from_complex(z)
        q = p.antipode()

        assert p.distance(q) == pytest.approx(1.0, abs=1e-15)

    def test_antipode_of_zero_is_infinity(self) -> None:
        """Should send 0 to infinity."""
        assert ProjectivePoint.from_complex(0).antipode().is_infinite

    def test_repr_shows_z(self) -> None:
        """Should print the affine coordinate."""
        assert repr(ProjectivePoint.from_complex(0.5)).startswith("ProjectivePoint(z=0.5")
        assert repr(ProjectivePoint.infinity()) == "ProjectivePoint(z=inf)"
