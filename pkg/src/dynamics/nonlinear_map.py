"""
The measurement-induced nonlinear map f(z) = 2z / (1 + z^2).

Homogeneous arithmetic of the map, its trajectories and success
probabilities, convergence classification toward the superattractive fixed
points z = +1 and z = -1, and state overlaps.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.config import get_config
from src.dynamics.point import ProjectivePoint

logger = logging.getLogger(__name__)

SQRT_HALF = math.sqrt(0.5)

PLUS_X = ProjectivePoint(1.0, 1.0)
MINUS_X = ProjectivePoint(1.0, -1.0)


class ConvergenceTag(str, Enum):
    """Where a trajectory ends up."""

    PLUS_X = "plus_x"
    MINUS_X = "minus_x"
    NON_CONVERGENT = "julia"

    @property
    def code(self) -> int:
        """Compact integer code used in raster storage."""
        return _TAG_CODES[self]

    @classmethod
    def from_code(cls, code: int) -> ConvergenceTag:
        return _CODE_TAGS[int(code)]


_TAG_CODES = {
    ConvergenceTag.NON_CONVERGENT: 0,
    ConvergenceTag.PLUS_X: 1,
    ConvergenceTag.MINUS_X: -1,
}
_CODE_TAGS = {code: tag for tag, code in _TAG_CODES.items()}


@dataclass(frozen=True)
class Classification:
    """
    Convergence verdict for one initial point.

    Attributes:
        tag: PLUS_X, MINUS_X or NON_CONVERGENT
        iterations: Map applications before entering the tolerance disk,
            or the iteration cap for NON_CONVERGENT
    """

    tag: ConvergenceTag
    iterations: int

    @property
    def converged(self) -> bool:
        return self.tag is not ConvergenceTag.NON_CONVERGENT


@dataclass(frozen=True)
class Trajectory:
    """
    Orbit of a point under the map.

    Attributes:
        points: points[k+1] = f(points[k])
        step_probabilities: step_probabilities[k] = success_probability(points[k])
    """

    points: Tuple[ProjectivePoint, ...]
    step_probabilities: Tuple[float, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def final(self) -> ProjectivePoint:
        return self.points[-1]

    def cumulative_probabilities(self) -> List[float]:
        """Running products of the step probabilities, one entry per step."""
        if not self.step_probabilities:
            return []
        return [float(x) for x in np.cumprod(self.step_probabilities)]


def map_step(p: ProjectivePoint) -> ProjectivePoint:
    """
    Apply f once in homogeneous form: (alpha, beta) -> (alpha^2 + beta^2, 2*alpha*beta).

    The poles z = +-i land on the point at infinity and infinity maps to 0.

    Args:
        p: Input point

    Returns:
        The normalized image f(p)
    """
    a, b = p.alpha, p.beta
    return ProjectivePoint(a * a + b * b, 2 * a * b)


def map_derivative(p: ProjectivePoint) -> complex:
    """
    f'(z) = 2(1 - z^2) / (1 + z^2)^2 at a finite, non-pole point.

    Raises:
        ValueError: At infinity or at the poles z = +-i
    """
    if p.is_infinite:
        raise ValueError("f' is not defined in the affine chart at infinity")
    z = p.z
    denom = (1 + z * z) ** 2
    if denom == 0:
        raise ValueError(f"f' has a pole at z = {z}")
    return 2 * (1 - z * z) / denom


def success_probability(p: ProjectivePoint) -> float:
    """
    Probability that one post-selection on the spatial qubit succeeds.

    1/2 + 2 (Re z)^2 / (1 + |z|^2)^2, which for a normalized pair is
    1/2 + 2 Re(conj(alpha) beta)^2. The point at infinity gives the limit 1/2.
    """
    overlap_re = (p.alpha.conjugate() * p.beta).real
    return 0.5 + 2.0 * overlap_re * overlap_re


def iterate(p: ProjectivePoint, n: int) -> Trajectory:
    """
    Follow the orbit of p for n steps.

    Args:
        p: Starting point
        n: Number of map applications (n >= 0)

    Returns:
        Trajectory with n+1 points and n step probabilities
    """
    if n < 0:
        raise ValueError(f"Number of iterations must be non-negative, got {n}")

    points = [p]
    probabilities = []
    for _ in range(n):
        probabilities.append(success_probability(points[-1]))
        points.append(map_step(points[-1]))
    return Trajectory(points=tuple(points), step_probabilities=tuple(probabilities))


def cumulative_success(p: ProjectivePoint, n: int) -> float:
    """
    Probability that n consecutive post-selections all succeed.

    Args:
        p: Starting point
        n: Number of steps (n >= 1)

    Returns:
        Product of the step probabilities along the trajectory
    """
    if n < 1:
        raise ValueError(f"Cumulative success needs at least one step, got {n}")
    return float(math.prod(iterate(p, n).step_probabilities))


def classify_many(
    alpha: ArrayLike,
    beta: ArrayLike,
    tol: float,
    max_iter: int,
) -> Tuple[NDArray[np.int8], NDArray[np.int32]]:
    """
    Classify many normalized homogeneous pairs at once.

    Each pair is iterated until its chordal distance to +1 or -1 drops below
    tol, or max_iter steps have been taken. Points that converge are dropped
    from the working set, so the cost follows the slowest pixels only.

    Args:
        alpha: Array of |0> amplitudes
        beta: Array of |1> amplitudes (same shape as alpha)
        tol: Convergence tolerance on chordal distance
        max_iter: Iteration cap

    Returns:
        (codes, iterations) arrays shaped like alpha; codes hold
        ConvergenceTag.code values
    """
    if tol <= 0:
        raise ValueError(f"Tolerance must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")

    a = np.asarray(alpha, dtype=np.complex128)
    b = np.asarray(beta, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError(f"alpha and beta shapes differ: {a.shape} vs {b.shape}")

    shape = a.shape
    codes = np.zeros(a.size, dtype=np.int8)
    iterations = np.full(a.size, max_iter, dtype=np.int32)

    idx = np.arange(a.size)
    ca = a.ravel().copy()
    cb = b.ravel().copy()

    for step in range(max_iter + 1):
        if step:
            na = ca * ca + cb * cb
            nb = 2 * ca * cb
            norm = np.sqrt(na.real**2 + na.imag**2 + nb.real**2 + nb.imag**2)
            ca = na / norm
            cb = nb / norm

        plus = np.abs(ca - cb) * SQRT_HALF < tol
        minus = (np.abs(ca + cb) * SQRT_HALF < tol) & ~plus
        hit = plus | minus

        codes[idx[plus]] = 1
        codes[idx[minus]] = -1
        iterations[idx[hit]] = step

        keep = ~hit
        idx, ca, cb = idx[keep], ca[keep], cb[keep]
        if idx.size == 0:
            break

    return codes.reshape(shape), iterations.reshape(shape)


def classify(
    p: ProjectivePoint,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> Classification:
    """
    Decide which fixed point the orbit of p approaches.

    Args:
        p: Initial point
        tol: Chordal tolerance around the fixed points (defaults to config)
        max_iter: Iteration cap (defaults to config)

    Returns:
        Classification with the first step inside a tolerance disk
    """
    config = get_config().map
    tol = config.tolerance if tol is None else tol
    max_iter = config.max_iter if max_iter is None else max_iter

    codes, iterations = classify_many(
        np.array([p.alpha]), np.array([p.beta]), tol=tol, max_iter=max_iter
    )
    return Classification(
        tag=ConvergenceTag.from_code(int(codes[0])),
        iterations=int(iterations[0]),
    )


def overlap(p1: ProjectivePoint, p2: ProjectivePoint) -> float:
    """
    Inner-product amplitude |<psi(z1)|psi(z2)>| of two qubit states.

    Returns:
        A value in [0, 1]; 1 for projectively equal points, 0 for antipodes
    """
    amplitude = p1.alpha.conjugate() * p2.alpha + p1.beta.conjugate() * p2.beta
    return min(1.0, abs(amplitude))


def overlap_squared(p1: ProjectivePoint, p2: ProjectivePoint) -> float:
    """Transition probability |<psi1|psi2>|^2 (the pure-state fidelity)."""
    return overlap(p1, p2) ** 2


def bloch_coords(p: ProjectivePoint) -> Tuple[float, float, float]:
    """
    Bloch-sphere coordinates (2 Re(a* b), 2 Im(a* b), |a|^2 - |b|^2).

    The fixed point z = +1 sits at (1, 0, 0) and z = 0 at the north pole.
    """
    cross = p.alpha.conjugate() * p.beta
    return (
        2.0 * cross.real,
        2.0 * cross.imag,
        abs(p.alpha) ** 2 - abs(p.beta) ** 2,
    )
