"""
Two-qubit realization of one protocol step.

Both qubits (polarization p and spatial mode s) start in the same state,
the entangling unitary U acts on the pair, and the spatial qubit is
projected onto |0>_s. The polarization qubit that survives the
post-selection carries f(z). Basis order is polarization-first:
(|00>, |01>, |10>, |11>) = |p s>.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List

import numpy as np
from numpy.typing import NDArray

from src.circuit.optics import hwp
from src.dynamics.point import ProjectivePoint

logger = logging.getLogger(__name__)

TwoQubitUnitary = NDArray[np.complex128]

NORM_TOL = 1e-12

_INV_SQRT2 = 1 / math.sqrt(2.0)

U_TILDE: TwoQubitUnitary = _INV_SQRT2 * np.array(
    [
        [1, 0, 1, 0],
        [0, -1, 0, 1],
        [1, 0, -1, 0],
        [0, 1, 0, 1],
    ],
    dtype=np.complex128,
)

U_CNOT: TwoQubitUnitary = np.array(
    [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ],
    dtype=np.complex128,
)

_P0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
_P1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)
_I2 = np.eye(2, dtype=np.complex128)


@dataclass(frozen=True)
class QubitState:
    """
    Normalized single-qubit amplitudes.

    Attributes:
        a0: Amplitude of |0>
        a1: Amplitude of |1>
    """

    a0: complex
    a1: complex

    def __post_init__(self) -> None:
        norm_sq = abs(self.a0) ** 2 + abs(self.a1) ** 2
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"Qubit state is not normalized: |a0|^2 + |a1|^2 = {norm_sq!r}")

    @classmethod
    def from_vector(cls, vector: NDArray[np.complex128]) -> QubitState:
        """Normalize a non-zero 2-vector into a QubitState."""
        norm = float(np.linalg.norm(vector))
        if norm == 0.0:
            raise ValueError("Cannot normalize the zero vector")
        return cls(complex(vector[0] / norm), complex(vector[1] / norm))

    @classmethod
    def from_point(cls, p: ProjectivePoint) -> QubitState:
        return cls(p.alpha, p.beta)

    @property
    def vector(self) -> NDArray[np.complex128]:
        return np.array([self.a0, self.a1], dtype=np.complex128)

    def to_point(self) -> ProjectivePoint:
        return ProjectivePoint(self.a0, self.a1)


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """
    Normalized amplitudes over (|00>, |01>, |10>, |11>), polarization first.

    Attributes:
        amplitudes: Length-4 complex vector
    """

    amplitudes: NDArray[np.complex128]

    def __post_init__(self) -> None:
        vector = np.asarray(self.amplitudes, dtype=np.complex128).reshape(4)
        norm_sq = float(np.vdot(vector, vector).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"Two-qubit state is not normalized: norm^2 = {norm_sq!r}")
        vector.setflags(write=False)
        object.__setattr__(self, "amplitudes", vector)


@dataclass(frozen=True)
class StepOutcome:
    """
    Both branches of the spatial-qubit measurement.

    Attributes:
        selected_state: Polarization state when the spatial qubit is found in |0>_s
        selected_probability: Probability of that outcome
        rejected_state: Polarization state when the spatial qubit is found in |1>_s
        rejected_probability: Probability of the rejected outcome
    """

    selected_state: QubitState
    selected_probability: float
    rejected_state: QubitState
    rejected_probability: float

    @property
    def selected_point(self) -> ProjectivePoint:
        return self.selected_state.to_point()


def build_u() -> TwoQubitUnitary:
    """The entangling unitary U, written out entry by entry."""
    return _INV_SQRT2 * np.array(
        [
            [1, 0, 0, 1],
            [0, -1, 1, 0],
            [0, 1, 1, 0],
            [1, 0, 0, -1],
        ],
        dtype=np.complex128,
    )


def build_u_decomposed() -> TwoQubitUnitary:
    """U assembled as U_CNOT^dagger . U_tilde . U_CNOT."""
    return U_CNOT.conj().T @ U_TILDE @ U_CNOT


def build_u_tilde_waveplates() -> TwoQubitUnitary:
    """
    U_tilde as two controlled polarization rotations.

    A HWP at 22.5 degrees acts in the lower spatial mode (|0>_s) and one at
    67.5 degrees in the upper mode (|1>_s).
    """
    return np.kron(hwp(math.pi / 8), _P0) + np.kron(hwp(3 * math.pi / 8), _P1)


def build_cnot_waveplates() -> TwoQubitUnitary:
    """U_CNOT as a 45 degree HWP on the spatial qubit controlled by |1>_p."""
    return np.kron(_P0, _I2) + np.kron(_P1, hwp(math.pi / 4))


def product_state(p: ProjectivePoint) -> TwoQubitState:
    """Both qubits prepared in the state of p: |psi>_p (x) |psi>_s."""
    v = np.array([p.alpha, p.beta], dtype=np.complex128)
    return TwoQubitState(np.kron(v, v))


def entangled_state(p: ProjectivePoint) -> TwoQubitState:
    """The composite state after U, proportional to (1 + z^2, 0, 2z, 1 - z^2)."""
    return TwoQubitState(build_u() @ product_state(p).amplitudes)


def apply_protocol_step(p: ProjectivePoint) -> StepOutcome:
    """
    Run one step of the protocol at the matrix level.

    Prepares the product state, applies U and projects the spatial qubit.
    The |01> amplitude vanishes identically, so the rejected branch is
    always |1>_p.

    Args:
        p: Input state of both qubits

    Returns:
        StepOutcome with both branches and their probabilities
    """
    psi = entangled_state(p).amplitudes

    # spatial qubit is the second tensor factor: s = 0 at indices 0, 2
    selected = psi[[0, 2]]
    rejected = psi[[1, 3]]

    selected_probability = float(np.vdot(selected, selected).real)
    rejected_probability = float(np.vdot(rejected, rejected).real)

    if rejected_probability > 0.0:
        rejected_state = QubitState.from_vector(rejected)
    else:
        rejected_state = QubitState(0j, 1 + 0j)

    return StepOutcome(
        selected_state=QubitState.from_vector(selected),
        selected_probability=selected_probability,
        rejected_state=rejected_state,
        rejected_probability=rejected_probability,
    )


def run_protocol(p: ProjectivePoint, n: int) -> List[StepOutcome]:
    """
    Chain n protocol steps, re-preparing both qubits from each selected output.

    Args:
        p: Initial state
        n: Number of steps

    Returns:
        One StepOutcome per step
    """
    if n < 0:
        raise ValueError(f"Number of steps must be non-negative, got {n}")

    outcomes = []
    current = p
    for step in range(n):
        outcome = apply_protocol_step(current)
        logger.debug(
            f"Step {step + 1}: z={current} -> {outcome.selected_point} "
            f"(P={outcome.selected_probability:.6f})"
        )
        outcomes.append(outcome)
        current = outcome.selected_point
    return outcomes
