"""
State discrimination by iterating the nonlinear protocol.

Two initial states are driven toward the opposite fixed points, so their
overlap shrinks with every step. The ideal pipeline iterates the map
exactly; the noisy pipeline reprepares both qubits each step from a
simulated tomography of the previous output, with Monte-Carlo error bars.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.circuit.protocol import apply_protocol_step
from src.config import get_config
from src.dynamics.nonlinear_map import iterate, map_step, overlap, success_probability
from src.dynamics.point import ProjectivePoint
from src.experiment.parsing import parse_complex
from src.tomography.estimator import TomographyError, simulate_tomography
from src.tomography.montecarlo import monte_carlo_error

logger = logging.getLogger(__name__)

StatePair = Tuple[ProjectivePoint, ProjectivePoint]
ProbabilityPair = Tuple[float, float]
TheoryRow = Tuple[float, ProbabilityPair, ProbabilityPair, StatePair]


class ExperimentError(Exception):
    """Raised when a tomography inside a discrimination run fails."""

    def __init__(self, iteration: int, state_index: int, cause: Exception):
        self.iteration = iteration
        self.state_index = state_index
        super().__init__(
            f"Tomography of state {state_index} failed at iteration {iteration}: {cause}"
        )


@dataclass(frozen=True)
class Preset:
    """A named initial pair with its iteration count."""

    z1: str
    z2: str
    iterations: int
    description: str


PRESETS: Dict[str, Preset] = {
    "symmetric": Preset("0.2", "-0.2", 3, "Real pair mirrored through the imaginary axis"),
    "offset": Preset("0.2", "-0.2-0.1i", 3, "Real state against an off-axis partner"),
    "rotated": Preset("0.2@45", "0.2@135", 4, "Equal-modulus pair at +45 and +135 degrees"),
}


def _coerce_point(value: Any) -> ProjectivePoint:
    if isinstance(value, ProjectivePoint):
        return value
    if isinstance(value, str):
        return parse_complex(value)
    if isinstance(value, (int, float, complex)):
        return ProjectivePoint.from_complex(complex(value))
    raise ValueError(f"Cannot interpret {value!r} as a state")


class ExperimentConfig(BaseModel):
    """
    Settings for one discrimination run.

    Points may be given as ProjectivePoints, numbers or text accepted by
    parse_complex. Noisy runs need a seed so their output is reproducible.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    z1: ProjectivePoint
    z2: ProjectivePoint
    iterations: int = Field(ge=0)
    mode: Literal["ideal", "noisy"] = "ideal"
    shots_per_setting: int = Field(default_factory=lambda: get_config().tomography.shots, ge=1)
    monte_carlo_trials: int = Field(default_factory=lambda: get_config().tomography.trials, ge=1)
    seed: Optional[int] = Field(default=None, ge=0)
    output_format: Literal["json", "csv"] = "json"
    workers: Optional[int] = Field(default=None, ge=1)

    @field_validator("z1", "z2", mode="before")
    @classmethod
    def _parse_point(cls, value: Any) -> ProjectivePoint:
        return _coerce_point(value)

    @model_validator(mode="after")
    def _check_noisy_settings(self) -> ExperimentConfig:
        if self.mode == "noisy":
            if self.seed is None:
                raise ValueError("Noisy mode requires a seed")
            if self.monte_carlo_trials < 2:
                raise ValueError("Noisy mode needs at least 2 Monte-Carlo trials")
        return self

    @classmethod
    def from_preset(cls, name: str, **overrides: Any) -> ExperimentConfig:
        """Config for a named preset; keyword arguments override its fields."""
        try:
            preset = PRESETS[name]
        except KeyError as e:
            raise ValueError(f"Unknown preset {name!r}; choose from {sorted(PRESETS)}") from e
        fields: Dict[str, Any] = {
            "z1": preset.z1,
            "z2": preset.z2,
            "iterations": preset.iterations,
        }
        fields.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**fields)

    @property
    def pair(self) -> StatePair:
        return self.z1, self.z2


@dataclass(frozen=True)
class IterationRecord:
    """
    Overlaps and costs after a given number of protocol steps.

    Attributes:
        iteration: Steps taken (0 is the initial pair)
        overlap_theory: Overlap of the exact map images of the initial pair
        overlap_sim: Overlap of the reconstructed states (noisy mode)
        error_bar: Monte-Carlo standard deviation of overlap_sim (noisy mode)
        p_success: Success probability of the step that produced each state
            (1.0 at iteration 0, where no post-selection has happened)
        cum_success: Product of all step probabilities so far, per state
        z: Current state of each branch; the reconstructed estimate in noisy mode
    """

    iteration: int
    overlap_theory: float
    overlap_sim: Optional[float]
    error_bar: Optional[float]
    p_success: ProbabilityPair
    cum_success: ProbabilityPair
    z: Tuple[ProjectivePoint, ProjectivePoint]


@dataclass(frozen=True)
class DiscriminationRecord:
    """
    Result of a discrimination run.

    Attributes:
        mode: "ideal" or "noisy"
        initial: The initial pair
        iterations: One IterationRecord per index 0..n
        shots_per_setting: Counts per analyzer setting (noisy mode)
        monte_carlo_trials: Monte-Carlo trials per error bar (noisy mode)
        seed: Master seed (noisy mode)
    """

    mode: str
    initial: StatePair
    iterations: Tuple[IterationRecord, ...]
    shots_per_setting: Optional[int] = None
    monte_carlo_trials: Optional[int] = None
    seed: Optional[int] = None

    @property
    def final(self) -> IterationRecord:
        return self.iterations[-1]


def _theory_rows(config: ExperimentConfig) -> List[TheoryRow]:
    """Exact overlaps, step probabilities and states at every index."""
    first = iterate(config.z1, config.iterations)
    second = iterate(config.z2, config.iterations)
    cum_first = [1.0] + first.cumulative_probabilities()
    cum_second = [1.0] + second.cumulative_probabilities()
    step_first = (1.0,) + first.step_probabilities
    step_second = (1.0,) + second.step_probabilities

    rows = []
    for k in range(config.iterations + 1):
        pair = (first.points[k], second.points[k])
        rows.append(
            (
                overlap(*pair),
                (step_first[k], step_second[k]),
                (cum_first[k], cum_second[k]),
                pair,
            )
        )
    return rows


def _run_ideal(config: ExperimentConfig) -> DiscriminationRecord:
    records = tuple(
        IterationRecord(
            iteration=k,
            overlap_theory=theory,
            overlap_sim=None,
            error_bar=None,
            p_success=steps,
            cum_success=cumulative,
            z=pair,
        )
        for k, (theory, steps, cumulative, pair) in enumerate(_theory_rows(config))
    )
    return DiscriminationRecord(mode="ideal", initial=config.pair, iterations=records)


def _tomography(
    p: ProjectivePoint,
    config: ExperimentConfig,
    seed: np.random.SeedSequence,
    k: int,
    index: int,
) -> ProjectivePoint:
    try:
        return simulate_tomography(p, config.shots_per_setting, seed).estimate
    except TomographyError as e:
        logger.error(f"Tomography of state {index} failed at iteration {k}: {e}")
        raise ExperimentError(k, index, e) from e


def _run_noisy(config: ExperimentConfig) -> DiscriminationRecord:
    theory = _theory_rows(config)
    iteration_seeds = np.random.SeedSequence(config.seed).spawn(config.iterations + 1)

    records = []
    estimates: StatePair = config.pair
    cumulative = [1.0, 1.0]
    for k, seed in enumerate(iteration_seeds):
        seed_first, seed_second, seed_mc = seed.spawn(3)

        if k == 0:
            prepared: StatePair = config.pair
            steps = (1.0, 1.0)
        else:
            outcomes = [apply_protocol_step(p) for p in estimates]
            prepared = (outcomes[0].selected_point, outcomes[1].selected_point)
            steps = (outcomes[0].selected_probability, outcomes[1].selected_probability)
            cumulative = [cumulative[0] * steps[0], cumulative[1] * steps[1]]

        estimates = (
            _tomography(prepared[0], config, seed_first, k, 1),
            _tomography(prepared[1], config, seed_second, k, 2),
        )
        try:
            summary = monte_carlo_error(
                prepared,
                nominal_total=config.shots_per_setting,
                trials=config.monte_carlo_trials,
                rng_seed=seed_mc,
                workers=config.workers,
            )
        except TomographyError as e:
            logger.error(f"Monte-Carlo error bar failed at iteration {k}: {e}")
            raise ExperimentError(k, 0, e) from e

        simulated = overlap(*estimates)
        logger.debug(
            f"Iteration {k}: overlap {simulated:.6f} +- {summary.std:.6f} "
            f"(theory {theory[k][0]:.6f})"
        )
        records.append(
            IterationRecord(
                iteration=k,
                overlap_theory=theory[k][0],
                overlap_sim=simulated,
                error_bar=summary.std,
                p_success=steps,
                cum_success=(cumulative[0], cumulative[1]),
                z=estimates,
            )
        )

    return DiscriminationRecord(
        mode="noisy",
        initial=config.pair,
        iterations=tuple(records),
        shots_per_setting=config.shots_per_setting,
        monte_carlo_trials=config.monte_carlo_trials,
        seed=config.seed,
    )


def run_discrimination(config: ExperimentConfig) -> DiscriminationRecord:
    """
    Iterate the protocol on a pair of states and track their overlap.

    Args:
        config: Pair, iteration count, mode and noise settings

    Returns:
        DiscriminationRecord with iterations + 1 entries

    Raises:
        ExperimentError: If a tomography fails in noisy mode
    """
    logger.info(
        f"Running {config.mode} discrimination of {config.z1} and {config.z2} "
        f"for {config.iterations} iteration(s)"
    )
    record = _run_ideal(config) if config.mode == "ideal" else _run_noisy(config)
    final = record.final
    shown = final.overlap_sim if final.overlap_sim is not None else final.overlap_theory
    logger.info(f"Final overlap after {final.iteration} iteration(s): {shown:.6f}")
    return record


@dataclass(frozen=True)
class OverlapTarget:
    """
    Cost of pushing a pair below a target overlap.

    Attributes:
        iterations: Fewest steps reaching the target
        overlap: Overlap after that many steps
        cum_success: Probability that every post-selection succeeds, per state
    """

    iterations: int
    overlap: float
    cum_success: ProbabilityPair


def iterations_to_overlap(
    pair: StatePair,
    target: float,
    max_iter: int = 50,
) -> Optional[OverlapTarget]:
    """
    Fewest ideal iterations that bring the overlap of pair below target.

    Args:
        pair: Initial states
        target: Overlap threshold in (0, 1]
        max_iter: Largest iteration count considered

    Returns:
        OverlapTarget, or None if the target is not reached within max_iter
    """
    if not 0.0 < target <= 1.0:
        raise ValueError(f"Target overlap must lie in (0, 1], got {target}")
    if max_iter < 0:
        raise ValueError(f"max_iter must be non-negative, got {max_iter}")

    first, second = pair
    cumulative = [1.0, 1.0]
    for k in range(max_iter + 1):
        current = overlap(first, second)
        if current < target:
            return OverlapTarget(
                iterations=k, overlap=current, cum_success=(cumulative[0], cumulative[1])
            )
        cumulative = [
            cumulative[0] * success_probability(first),
            cumulative[1] * success_probability(second),
        ]
        first, second = map_step(first), map_step(second)

    logger.debug(f"Overlap target {target} not reached within {max_iter} iterations")
    return None

