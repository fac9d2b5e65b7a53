"""
Dynamics module for NLQ-Sim.
Projective points and the nonlinear map f(z) = 2z / (1 + z^2).
"""

from src.dynamics.nonlinear_map import (
    MINUS_X,
    PLUS_X,
    Classification,
    ConvergenceTag,
    Trajectory,
    bloch_coords,
    classify,
    classify_many,
    cumulative_success,
    iterate,
    map_derivative,
    map_step,
    overlap,
    overlap_squared,
    success_probability,
)
from src.dynamics.point import EQUALITY_TOL, ProjectivePoint, chordal_distance

__all__ = [
    "ProjectivePoint",
    "EQUALITY_TOL",
    "chordal_distance",
    "PLUS_X",
    "MINUS_X",
    "Classification",
    "ConvergenceTag",
    "Trajectory",
    "map_step",
    "map_derivative",
    "iterate",
    "success_probability",
    "cumulative_success",
    "classify",
    "classify_many",
    "overlap",
    "overlap_squared",
    "bloch_coords",
]
