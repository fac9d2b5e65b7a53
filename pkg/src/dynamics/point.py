"""
Projective points on the extended complex plane.

A qubit state (|0> + z|1>)/sqrt(1+|z|^2) is stored as the homogeneous pair
(alpha, beta) with z = beta/alpha, so the poles of the nonlinear map and the
point at infinity need no special casing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from src.config import MapConfig

# Default projective equality tolerance on |alpha1*beta2 - alpha2*beta1|;
# NLQ_EQUALITY_TOL overrides it
EQUALITY_TOL = 1e-9


def chordal_distance(alpha1: complex, beta1: complex, alpha2: complex, beta2: complex) -> float:
    """
    Distance between two normalized homogeneous pairs.

    Equals |alpha1*beta2 - alpha2*beta1|, the sine of half the Bloch-sphere
    angle between the states. Zero iff the pairs are projectively equal.
    """
    return abs(alpha1 * beta2 - alpha2 * beta1)


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """
    A point of the Riemann sphere in homogeneous form.

    Every instance is normalized so that |alpha|^2 + |beta|^2 = 1 and carries a
    canonical global phase: alpha is real and non-negative, or, at infinity,
    beta is real and positive. Two points compare equal when they are
    projectively equal within the configured equality tolerance
    (NLQ_EQUALITY_TOL, default EQUALITY_TOL).

    Attributes:
        alpha: Amplitude of |0>
        beta: Amplitude of |1>

    Example:
        p = ProjectivePoint.from_complex(0.2)
        q = ProjectivePoint.infinity()
        assert q.is_infinite
    """

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        a = complex(self.alpha)
        b = complex(self.beta)
        if not (cmath.isfinite(a) and cmath.isfinite(b)):
            raise ValueError(f"Homogeneous coordinates must be finite, got ({a}, {b})")

        norm = math.hypot(abs(a), abs(b))
        if norm == 0.0:
            raise ValueError("(0, 0) does not describe a point")
        a, b = a / norm, b / norm

        if a != 0:
            phase = a.conjugate() / abs(a)
            a, b = complex(abs(a), 0.0), b * phase
        else:
            a, b = 0j, complex(abs(b), 0.0)

        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def from_complex(cls, z: complex) -> ProjectivePoint:
        """
        Build the point for a complex number z; infinite z gives the point at infinity.

        Args:
            z: State parameter of (|0> + z|1>)/sqrt(1+|z|^2)

        Returns:
            The corresponding ProjectivePoint
        """
        z = complex(z)
        if cmath.isinf(z):
            return cls.infinity()
        if cmath.isnan(z):
            raise ValueError("z must not be NaN")
        return cls(1.0, z)

    @classmethod
    def infinity(cls) -> ProjectivePoint:
        """The point at infinity, i.e. the state |1>."""
        return cls(0.0, 1.0)

    @property
    def is_infinite(self) -> bool:
        """True for the point at infinity (alpha == 0)."""
        return self.alpha == 0

    @property
    def z(self) -> complex:
        """The affine coordinate beta/alpha; complex('inf') at infinity."""
        if self.is_infinite:
            return complex(math.inf, 0.0)
        return self.beta / self.alpha

    def distance(self, other: ProjectivePoint) -> float:
        """Chordal distance to another point."""
        return chordal_distance(self.alpha, self.beta, other.alpha, other.beta)

    def is_close(self, other: ProjectivePoint, tol: Optional[float] = None) -> bool:
        """Projective equality within tol, or the configured tolerance when None."""
        if tol is None:
            tol = MapConfig().equality_tol
        return self.distance(other) <= tol

    def antipode(self) -> ProjectivePoint:
        """The orthogonal state, z -> -1/conj(z)."""
        return ProjectivePoint(-self.beta.conjugate(), self.alpha.conjugate())

    def as_vector(self) -> tuple[complex, complex]:
        """Amplitudes over (|0>, |1>)."""
        return self.alpha, self.beta

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.is_close(other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if self.is_infinite:
            return "ProjectivePoint(z=inf)"
        return f"ProjectivePoint(z={self.z:.9g})"
