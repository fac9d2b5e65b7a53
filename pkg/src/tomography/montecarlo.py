"""
Monte-Carlo error bars for tomographic overlap estimates.

Each trial runs an independent tomography of both states of a pair and
records the overlap of the two reconstructed pure states. Trials draw from
their own child seeds, so the summary does not depend on how trials are
spread over worker processes.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from src.config import get_config
from src.dynamics.nonlinear_map import overlap
from src.dynamics.point import ProjectivePoint
from src.tomography.estimator import (
    DEFAULT_BASES,
    NOMINAL_TOTAL,
    TomographyBases,
    TomographyError,
    simulate_tomography,
)

logger = logging.getLogger(__name__)

StatePair = Tuple[ProjectivePoint, ProjectivePoint]


@dataclass(frozen=True)
class MonteCarloSummary:
    """
    Sample statistics of the simulated overlap.

    Attributes:
        mean: Mean overlap over successful trials
        std: Sample standard deviation (ddof=1)
        trials: Number of trials requested
        failed: Trials discarded because a reconstruction failed
        values: Overlap per successful trial, in trial order
    """

    mean: float
    std: float
    trials: int
    failed: int
    values: Tuple[float, ...]


def _as_seed_sequence(rng_seed: Union[int, np.random.SeedSequence]) -> np.random.SeedSequence:
    if isinstance(rng_seed, np.random.SeedSequence):
        return rng_seed
    return np.random.SeedSequence(rng_seed)


def _run_trial(
    pair: StatePair,
    nominal_total: int,
    seed: np.random.SeedSequence,
    bases: TomographyBases,
) -> Optional[float]:
    """One tomography of each state; None when either reconstruction fails."""
    rng = np.random.default_rng(seed)
    try:
        first = simulate_tomography(pair[0], nominal_total, rng, bases)
        second = simulate_tomography(pair[1], nominal_total, rng, bases)
    except TomographyError as e:
        logger.warning(f"Discarding Monte-Carlo trial: {e}")
        return None
    return overlap(first.estimate, second.estimate)


def monte_carlo_error(
    true_state_pair: StatePair,
    nominal_total: int = NOMINAL_TOTAL,
    trials: Optional[int] = None,
    rng_seed: Union[int, np.random.SeedSequence] = 0,
    workers: Optional[int] = None,
    bases: TomographyBases = DEFAULT_BASES,
) -> MonteCarloSummary:
    """
    Spread of the reconstructed overlap under Poissonian counting noise.

    Args:
        true_state_pair: The two states being measured
        nominal_total: Expected counts per analyzer setting
        trials: Number of independent tomography runs (>= 2, defaults to config)
        rng_seed: Master seed; trial k uses the k-th spawned child
        workers: Process count; 1 runs in-process (defaults to config)
        bases: Analyzer settings

    Returns:
        MonteCarloSummary over the successful trials

    Raises:
        TomographyError: If fewer than two trials succeed
    """
    config = get_config().tomography
    trials = config.trials if trials is None else trials
    workers = config.mc_workers if workers is None else workers

    if trials < 2:
        raise ValueError(f"Monte-Carlo error needs at least 2 trials, got {trials}")
    if nominal_total <= 0:
        raise ValueError(f"nominal_total must be positive, got {nominal_total}")

    seeds = _as_seed_sequence(rng_seed).spawn(trials)
    args = [(true_state_pair, nominal_total, seed, bases) for seed in seeds]

    results: List[Optional[float]]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_run_trial, *zip(*args)))
    else:
        results = [_run_trial(*a) for a in args]

    values = tuple(v for v in results if v is not None)
    failed = trials - len(values)
    if len(values) < 2:
        raise TomographyError(
            f"Only {len(values)} of {trials} Monte-Carlo trials produced an estimate"
        )
    if failed:
        logger.warning(f"{failed} of {trials} Monte-Carlo trials were discarded")

    sample = np.array(values)
    summary = MonteCarloSummary(
        mean=float(sample.mean()),
        std=float(sample.std(ddof=1)),
        trials=trials,
        failed=failed,
        values=values,
    )
    logger.debug(
        f"Monte-Carlo overlap {summary.mean:.6f} +- {summary.std:.6f} "
        f"({trials} trials, N={nominal_total})"
    )
    return summary
