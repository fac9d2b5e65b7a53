"""
Waveplate optics for state preparation and analysis.

Jones matrices of half- and quarter-wave plates, the mapping from the
preparation waveplate angles to the state parameter z, and its numerical
inverse.
"""

from __future__ import annotations

import logging
import math
from typing import Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import least_squares

from src.dynamics.point import ProjectivePoint

logger = logging.getLogger(__name__)

JonesMatrix = NDArray[np.complex128]

H_KET = np.array([1.0, 0.0], dtype=np.complex128)
V_KET = np.array([0.0, 1.0], dtype=np.complex128)

# Target accuracy of invert_preparation (chordal distance)
INVERSION_TOL = 1e-9
GRID_SIZE = 360
REFINE_CANDIDATES = 8


class PreparationError(Exception):
    """Raised when no preparation angles reproduce a requested state."""

    pass


def is_unitary(matrix: NDArray[np.complex128], tol: float = 1e-12) -> bool:
    """Check M^dagger M = I entry-wise within tol."""
    identity = np.eye(matrix.shape[0], dtype=np.complex128)
    return bool(np.allclose(matrix.conj().T @ matrix, identity, rtol=0.0, atol=tol))


def hwp(theta: float) -> JonesMatrix:
    """
    Half-wave plate with fast axis at theta (radians).

    [[cos 2t, sin 2t], [sin 2t, -cos 2t]]
    """
    c, s = math.cos(2 * theta), math.sin(2 * theta)
    return np.array([[c, s], [s, -c]], dtype=np.complex128)


def qwp(theta: float) -> JonesMatrix:
    """
    Quarter-wave plate with fast axis at theta (radians).

    [[cos^2 t + i sin^2 t, (1-i) sin t cos t], [(1-i) sin t cos t, sin^2 t + i cos^2 t]]
    """
    c, s = math.cos(theta), math.sin(theta)
    off = (1 - 1j) * s * c
    return np.array(
        [[c * c + 1j * s * s, off], [off, s * s + 1j * c * c]],
        dtype=np.complex128,
    )


def prepare_z(theta_q: float, theta_h: float) -> ProjectivePoint:
    """
    State prepared by a QWP at theta_q followed by a HWP at theta_h acting on |H>.

    z = [i sin 2h + sin(2h - 2q)] / [i cos 2h + cos(2h - 2q)], returned as the
    homogeneous pair (denominator, numerator) so a vanishing denominator
    simply gives the point at infinity.

    Args:
        theta_q: QWP angle in radians
        theta_h: HWP angle in radians

    Returns:
        The prepared ProjectivePoint
    """
    two_h = 2 * theta_h
    two_d = 2 * (theta_h - theta_q)
    numerator = complex(math.sin(two_d), math.sin(two_h))
    denominator = complex(math.cos(two_d), math.cos(two_h))
    return ProjectivePoint(denominator, numerator)


def prepare_state_jones(theta_q: float, theta_h: float) -> ProjectivePoint:
    """The same preparation computed as HWP(theta_h) . QWP(theta_q) . |H>."""
    vector = hwp(theta_h) @ qwp(theta_q) @ H_KET
    return ProjectivePoint(vector[0], vector[1])


def _preparation_mismatch(
    theta_q: NDArray[np.float64],
    theta_h: NDArray[np.float64],
    target: ProjectivePoint,
) -> NDArray[np.complex128]:
    """
    Signed cross product between prepared states and the target.

    |numerator|^2 + |denominator|^2 = 2 for every angle pair, so dividing by
    sqrt(2) makes the modulus the chordal distance.
    """
    two_h = 2 * theta_h
    two_d = 2 * (theta_h - theta_q)
    numerator = np.sin(two_d) + 1j * np.sin(two_h)
    denominator = np.cos(two_d) + 1j * np.cos(two_h)
    return (denominator * target.beta - numerator * target.alpha) / math.sqrt(2.0)


def _wrap(angle: float) -> float:
    wrapped = math.fmod(angle, math.pi)
    if wrapped < 0:
        wrapped += math.pi
    if wrapped >= math.pi:
        wrapped = 0.0
    return wrapped


def invert_preparation(p: ProjectivePoint) -> Tuple[float, float]:
    """
    Find preparation angles that produce p.

    A coarse grid over [0, pi)^2 picks the best starting points, each of which
    is polished with a Levenberg-Marquardt solve on the real and imaginary
    parts of the cross product.

    Args:
        p: Target state

    Returns:
        (theta_q, theta_h) in [0, pi)

    Raises:
        PreparationError: If no candidate reaches INVERSION_TOL
    """
    grid = np.arange(GRID_SIZE) * (math.pi / GRID_SIZE)
    grid_q, grid_h = np.meshgrid(grid, grid, indexing="ij")
    distance = np.abs(_preparation_mismatch(grid_q, grid_h, p))

    order = np.argsort(distance, axis=None, kind="stable")[:REFINE_CANDIDATES]

    def residual(x: NDArray[np.float64]) -> NDArray[np.float64]:
        r = _preparation_mismatch(np.array(x[0]), np.array(x[1]), p)
        return np.array([r.real, r.imag], dtype=np.float64)

    best: Tuple[float, float, float] = (math.inf, 0.0, 0.0)
    for flat in order:
        i, j = np.unravel_index(flat, distance.shape)
        x0 = np.array([grid[i], grid[j]])
        solution = least_squares(residual, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        theta_q, theta_h = _wrap(float(solution.x[0])), _wrap(float(solution.x[1]))
        achieved = prepare_z(theta_q, theta_h).distance(p)
        if achieved < best[0]:
            best = (achieved, theta_q, theta_h)
        if achieved <= INVERSION_TOL * 1e-3:
            break

    achieved, theta_q, theta_h = best
    if achieved > INVERSION_TOL:
        logger.error(f"Preparation inversion stalled at distance {achieved:.3e} for {p}")
        raise PreparationError(
            f"Could not find preparation angles for {p}: best distance {achieved:.3e}"
        )

    logger.debug(f"Inverted {p} to theta_q={theta_q:.12f}, theta_h={theta_h:.12f}")
    return theta_q, theta_h
