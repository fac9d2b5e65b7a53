"""
Single-qubit polarization tomography.

Four analyzer settings (QWP, HWP, PBS) project onto |H>, |V>,
(|H>+|V>)/sqrt(2) and (|H>-i|V>)/sqrt(2). Counts are drawn from independent
Poisson distributions, the density matrix is recovered by maximum
likelihood, and the closest pure state is read off its dominant eigenvector.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize
from scipy.special import xlogy

from src.circuit.optics import H_KET, hwp, qwp
from src.config import get_config
from src.dynamics.point import ProjectivePoint

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]

DENSITY_TOL = 1e-10
DEGENERACY_GAP = 1e-12
NOMINAL_TOTAL = 12000

# Fraction of I/2 mixed into the linear-inversion start so it has a Cholesky factor
_START_MIXING = 0.05

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


class TomographyError(Exception):
    """Base exception for tomography failures."""

    pass


class DegenerateStateError(TomographyError):
    """Raised when a density matrix has no unique dominant eigenvector."""

    pass


class MLEConvergenceError(TomographyError):
    """Raised when the likelihood ascent cannot produce an estimate."""

    pass


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    A physical single-qubit density matrix.

    Hermitian, unit trace and positive semidefinite, each within DENSITY_TOL.

    Attributes:
        matrix: 2x2 complex array
    """

    matrix: NDArray[np.complex128]

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128).reshape(2, 2)
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=DENSITY_TOL):
            raise ValueError("Density matrix is not Hermitian")
        trace = np.trace(m)
        if abs(trace - 1.0) > DENSITY_TOL:
            raise ValueError(f"Density matrix trace is {trace}, expected 1")
        eigenvalues = np.linalg.eigvalsh(m)
        if eigenvalues[0] < -DENSITY_TOL:
            raise ValueError(f"Density matrix has negative eigenvalue {eigenvalues[0]:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_point(cls, p: ProjectivePoint) -> DensityMatrix:
        """The pure state |psi><psi| of a projective point."""
        v = np.array([p.alpha, p.beta], dtype=np.complex128)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def from_bloch(cls, x: float, y: float, z: float) -> DensityMatrix:
        """(I + r.sigma)/2 for a Bloch vector inside the unit ball."""
        return cls(0.5 * (np.eye(2) + x * _SIGMA_X + y * _SIGMA_Y + z * _SIGMA_Z))

    @classmethod
    def maximally_mixed(cls) -> DensityMatrix:
        return cls(0.5 * np.eye(2, dtype=np.complex128))

    def bloch_vector(self) -> Tuple[float, float, float]:
        m = self.matrix
        return (
            float(2 * m[1, 0].real),
            float(2 * m[1, 0].imag),
            float((m[0, 0] - m[1, 1]).real),
        )


def _analyzer_ket(theta_q: float, theta_h: float) -> NDArray[np.complex128]:
    """State transmitted by QWP(theta_q), HWP(theta_h) and an H-passing PBS."""
    return (hwp(theta_h) @ qwp(theta_q)).conj().T @ H_KET


@dataclass(frozen=True)
class TomographyBases:
    """
    The four analyzer settings.

    Attributes:
        labels: Short names of the projected states
        kets: The projected states, as stated for the experiment
        analyzer_angles: (QWP, HWP) angles in radians realizing each projection
    """

    labels: Tuple[str, ...] = ("H", "V", "D", "R")
    kets: Tuple[Tuple[complex, complex], ...] = (
        (1, 0),
        (0, 1),
        (1 / math.sqrt(2), 1 / math.sqrt(2)),
        (1 / math.sqrt(2), -1j / math.sqrt(2)),
    )
    analyzer_angles: Tuple[Tuple[float, float], ...] = (
        (0.0, 0.0),
        (0.0, math.pi / 4),
        (math.pi / 4, math.pi / 8),
        (0.0, math.pi / 8),
    )
    projectors: NDArray[np.complex128] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (len(self.labels) == len(self.kets) == len(self.analyzer_angles)):
            raise ValueError("labels, kets and analyzer_angles must have the same length")

        projectors = []
        for label, ket, angles in zip(self.labels, self.kets, self.analyzer_angles):
            v = np.array(ket, dtype=np.complex128)
            projector = np.outer(v, v.conj())
            analyzed = _analyzer_ket(*angles)
            if not np.allclose(np.outer(analyzed, analyzed.conj()), projector, atol=1e-12):
                raise ValueError(f"Analyzer angles {angles} do not project onto {label}")
            projectors.append(projector)

        stacked = np.array(projectors)
        stacked.setflags(write=False)
        object.__setattr__(self, "projectors", stacked)


DEFAULT_BASES = TomographyBases()


@dataclass(frozen=True)
class CountRecord:
    """
    Photon counts for each analyzer setting.

    Attributes:
        counts: One non-negative count per basis
        nominal_total: Expected counts per setting
    """

    counts: Tuple[int, ...]
    nominal_total: int = NOMINAL_TOTAL

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise ValueError(f"Counts must be non-negative, got {counts}")
        if self.nominal_total <= 0:
            raise ValueError(f"nominal_total must be positive, got {self.nominal_total}")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class TomographyRun:
    """One simulated tomography: counts, estimate and the refitted pure state."""

    record: CountRecord
    rho: DensityMatrix
    estimate: ProjectivePoint


def measurement_probabilities(
    rho: DensityMatrix,
    bases: TomographyBases = DEFAULT_BASES,
) -> NDArray[np.float64]:
    """
    Tr(P_k rho) for every analyzer projector.

    Args:
        rho: State being analyzed
        bases: Analyzer settings

    Returns:
        Array of probabilities, one per basis, clipped to [0, 1]
    """
    probabilities = np.einsum("kij,ji->k", bases.projectors, rho.matrix).real
    return np.clip(probabilities, 0.0, 1.0)


def sample_counts(
    probabilities: ArrayLike,
    nominal_total: int = NOMINAL_TOTAL,
    rng_seed: SeedLike = None,
) -> CountRecord:
    """
    Draw independent Poisson(N p_k) counts.

    Args:
        probabilities: Per-setting probabilities
        nominal_total: Expected counts N per setting
        rng_seed: Seed, SeedSequence or Generator; equal seeds give equal counts

    Returns:
        CountRecord of the sampled counts
    """
    if nominal_total <= 0:
        raise ValueError(f"nominal_total must be positive, got {nominal_total}")
    p = np.asarray(probabilities, dtype=np.float64)
    if np.any(p < 0) or np.any(p > 1):
        raise ValueError(f"Probabilities must lie in [0, 1], got {p}")

    rng = np.random.default_rng(rng_seed)
    counts = rng.poisson(nominal_total * p)
    return CountRecord(counts=tuple(int(c) for c in counts), nominal_total=nominal_total)


def linear_inversion(
    record: CountRecord,
    bases: TomographyBases = DEFAULT_BASES,
) -> DensityMatrix:
    """
    Stokes-parameter estimate from the four counts, shrunk into the Bloch ball.

    The H and V counts fix the intensity; D and R give the x and -y
    components. Only the standard four-setting layout is supported.
    """
    if bases.labels != ("H", "V", "D", "R"):
        raise ValueError(f"Linear inversion expects H, V, D, R settings, got {bases.labels}")

    n_h, n_v, n_d, n_r = record.counts
    intensity = n_h + n_v
    if intensity == 0:
        return DensityMatrix.maximally_mixed()

    x = 2.0 * n_d / intensity - 1.0
    y = 1.0 - 2.0 * n_r / intensity
    z = (n_h - n_v) / intensity
    length = math.sqrt(x * x + y * y + z * z)
    if length > 1.0:
        x, y, z = x / length, y / length, z / length
    return DensityMatrix.from_bloch(x, y, z)


def _cholesky_to_rho(params: NDArray[np.float64]) -> Optional[NDArray[np.complex128]]:
    lower = np.array(
        [[params[0], 0.0], [params[2] + 1j * params[3], params[1]]],
        dtype=np.complex128,
    )
    rho = lower @ lower.conj().T
    trace = float(np.trace(rho).real)
    if trace <= 0.0:
        return None
    return rho / trace


def mle_reconstruct(
    record: CountRecord,
    bases: TomographyBases = DEFAULT_BASES,
    max_iter: Optional[int] = None,
    tol: Optional[float] = None,
) -> DensityMatrix:
    """
    Maximum-likelihood density matrix for a set of Poisson counts.

    The state is parameterized as rho = L L^dagger / Tr(L L^dagger) with L
    lower triangular (real diagonal), which keeps every candidate physical.
    The unknown intensity is profiled out, leaving the relative-entropy form
    sum_k f_k log(f_k / q_k) between observed fractions f_k and model
    fractions q_k. Nelder-Mead ascends the likelihood from the linear
    inversion estimate until the per-count improvement drops below tol.

    Only the relative counts enter the fit; record.nominal_total is ignored.
    This is not the known-intensity Poisson estimate, and on very sparse
    records it can sit far from it: counts (1, 0, 0, 0) give rho_00 near 0.89
    rather than 1.

    Args:
        record: Observed counts
        bases: Analyzer settings
        max_iter: Iteration cap (defaults to config)
        tol: Likelihood change that ends the ascent (defaults to config)

    Returns:
        The reconstructed DensityMatrix

    Raises:
        MLEConvergenceError: If no count is positive or the cap is reached
    """
    config = get_config().tomography
    max_iter = config.mle_max_iter if max_iter is None else max_iter
    tol = config.mle_tol if tol is None else tol

    counts = np.asarray(record.counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise MLEConvergenceError("Maximum likelihood needs at least one positive count")
    fractions = counts / total
    entropy = float(xlogy(fractions, fractions).sum())

    linear = linear_inversion(record, bases).matrix
    start = (1 - _START_MIXING) * linear + _START_MIXING * 0.5 * np.eye(2)
    chol = np.linalg.cholesky(start)
    x0 = np.array([chol[0, 0].real, chol[1, 1].real, chol[1, 0].real, chol[1, 0].imag])

    def objective(params: NDArray[np.float64]) -> float:
        rho = _cholesky_to_rho(params)
        if rho is None:
            return math.inf
        model = np.einsum("kij,ji->k", bases.projectors, rho).real
        model = model / model.sum()
        cross = xlogy(fractions, model).sum()
        if not np.isfinite(cross):
            return math.inf
        # pins the free scale of L so the simplex can collapse
        scale = float(params @ params) - 1.0
        return entropy - float(cross) + scale * scale

    result = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={"maxiter": max_iter, "maxfev": 10 * max_iter, "xatol": 1e-9, "fatol": tol},
    )
    if not result.success:
        logger.error(f"MLE did not converge for counts {record.counts}: {result.message}")
        raise MLEConvergenceError(
            f"Likelihood ascent stopped after {result.nit} iterations: {result.message}"
        )

    rho = _cholesky_to_rho(result.x)
    if rho is None:
        raise MLEConvergenceError(f"Degenerate estimate for counts {record.counts}")
    rho = 0.5 * (rho + rho.conj().T)
    logger.debug(f"MLE converged in {result.nit} iterations for counts {record.counts}")
    return DensityMatrix(rho)


def state_fidelity(rho: DensityMatrix, p: ProjectivePoint) -> float:
    """<psi|rho|psi> for a pure reference state."""
    v = np.array([p.alpha, p.beta], dtype=np.complex128)
    return float(np.vdot(v, rho.matrix @ v).real)


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2)."""
    return float(np.trace(rho.matrix @ rho.matrix).real)


def nearest_pure_state(rho: DensityMatrix) -> ProjectivePoint:
    """
    Closest pure state to rho in the least-squares sense.

    This is the eigenvector of the largest eigenvalue.

    Raises:
        DegenerateStateError: If the eigenvalue gap is below DEGENERACY_GAP
    """
    eigenvalues, eigenvectors = np.linalg.eigh(rho.matrix)
    gap = float(eigenvalues[1] - eigenvalues[0])
    if gap < DEGENERACY_GAP:
        raise DegenerateStateError(
            f"No unique nearest pure state: eigenvalue gap {gap:.3e} below {DEGENERACY_GAP}"
        )
    dominant = eigenvectors[:, 1]
    return ProjectivePoint(complex(dominant[0]), complex(dominant[1]))


def simulate_tomography(
    p: ProjectivePoint,
    nominal_total: int = NOMINAL_TOTAL,
    rng_seed: SeedLike = None,
    bases: TomographyBases = DEFAULT_BASES,
) -> TomographyRun:
    """
    Full measurement chain for a pure input: probabilities, counts, MLE, refit.

    Args:
        p: True state
        nominal_total: Expected counts per setting
        rng_seed: Seed, SeedSequence or Generator for the count noise
        bases: Analyzer settings

    Returns:
        TomographyRun with the counts, the estimate and its pure refit
    """
    probabilities = measurement_probabilities(DensityMatrix.from_point(p), bases)
    record = sample_counts(probabilities, nominal_total, rng_seed)
    rho = mle_reconstruct(record, bases)
    return TomographyRun(record=record, rho=rho, estimate=nearest_pure_state(rho))


def exact_record(
    p: ProjectivePoint,
    nominal_total: int = NOMINAL_TOTAL,
    bases: TomographyBases = DEFAULT_BASES,
) -> CountRecord:
    """Noiseless counts N p_k rounded to integers, for testing estimator bias."""
    probabilities = measurement_probabilities(DensityMatrix.from_point(p), bases)
    return CountRecord(
        counts=tuple(int(round(c)) for c in nominal_total * probabilities),
        nominal_total=nominal_total,
    )
