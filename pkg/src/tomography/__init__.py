"""
Tomography module for NLQ-Sim.
Four-setting polarization tomography, maximum-likelihood reconstruction and Monte-Carlo error bars.
"""

from src.tomography.estimator import (
    DEFAULT_BASES,
    NOMINAL_TOTAL,
    CountRecord,
    DegenerateStateError,
    DensityMatrix,
    MLEConvergenceError,
    TomographyBases,
    TomographyError,
    TomographyRun,
    exact_record,
    linear_inversion,
    measurement_probabilities,
    mle_reconstruct,
    nearest_pure_state,
    purity,
    sample_counts,
    simulate_tomography,
    state_fidelity,
)
from src.tomography.montecarlo import MonteCarloSummary, monte_carlo_error

__all__ = [
    "DensityMatrix",
    "TomographyBases",
    "DEFAULT_BASES",
    "NOMINAL_TOTAL",
    "CountRecord",
    "TomographyRun",
    "TomographyError",
    "DegenerateStateError",
    "MLEConvergenceError",
    "measurement_probabilities",
    "sample_counts",
    "linear_inversion",
    "mle_reconstruct",
    "nearest_pure_state",
    "state_fidelity",
    "purity",
    "simulate_tomography",
    "exact_record",
    "MonteCarloSummary",
    "monte_carlo_error",
]
