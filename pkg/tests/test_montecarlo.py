"""
Tests for Monte-Carlo overlap error bars.
"""

import pytest

from src.dynamics.point import ProjectivePoint
from src.tomography.montecarlo import MonteCarloSummary, monte_carlo_error

PAIR = (ProjectivePoint.from_complex(0.2), ProjectivePoint.from_complex(-0.2))


class TestMonteCarloError:
    """Tests for monte_carlo_error."""

    def test_summary_shape(self) -> None:
        """Should report one value per successful trial."""
        summary = monte_carlo_error(PAIR, nominal_total=12000, trials=5, rng_seed=1, workers=1)

        assert isinstance(summary, MonteCarloSummary)
        assert summary.trials == 5
        assert summary.failed == 0
        assert len(summary.values) == 5
        assert min(summary.values) <= summary.mean <= max(summary.values)

    def test_deterministic_for_fixed_seed(self) -> None:
        """Should repeat the statistics for the same seed."""
        first = monte_carlo_error(PAIR, nominal_total=12000, trials=4, rng_seed=7, workers=1)
        second = monte_carlo_error(PAIR, nominal_total=12000, trials=4, rng_seed=7, workers=1)

        assert first == second

    def test_different_seeds_differ(self) -> None:
        """Should draw fresh noise for another seed."""
        first = monte_carlo_error(PAIR, nominal_total=12000, trials=4, rng_seed=7, workers=1)
        second = monte_carlo_error(PAIR, nominal_total=12000, trials=4, rng_seed=8, workers=1)

        assert first.values != second.values

    def test_worker_count_does_not_change_results(self) -> None:
        """Should give identical values in-process and in a pool."""
        serial = monte_carlo_error(PAIR, nominal_total=12000, trials=4, rng_seed=3, workers=1)
        pooled = monte_carlo_error(PAIR, nominal_total=12000, trials=4, rng_seed=3, workers=2)

        assert serial.values == pooled.values

    def test_large_counts_are_unbiased(self) -> None:
        """Should center on the true overlap with a tiny spread at N = 1e9."""
        summary = monte_carlo_error(PAIR, nominal_total=10**9, trials=10, rng_seed=0, workers=1)

        assert summary.mean == pytest.approx(0.923077, abs=1e-3)
        assert summary.std < 1e-3

    @pytest.mark.slow
    def test_spread_at_nominal_counts(self) -> None:
        """Should give an error bar between 0.001 and 0.01 at 12,000 counts."""
        summary = monte_carlo_error(PAIR, nominal_total=12000, trials=100, rng_seed=0, workers=1)

        assert 0.001 <= summary.std <= 0.01

    @pytest.mark.slow
    def test_spread_shrinks_with_counts(self) -> None:
        """Should narrow as the count level grows."""
        low = monte_carlo_error(PAIR, nominal_total=10**4, trials=30, rng_seed=2, workers=1)
        high = monte_carlo_error(PAIR, nominal_total=10**7, trials=30, rng_seed=2, workers=1)

        assert high.std < low.std

    def test_rejects_too_few_trials(self) -> None:
        """Should refuse fewer than two trials."""
        with pytest.raises(ValueError):
            monte_carlo_error(PAIR, trials=1)

    def test_rejects_non_positive_counts(self) -> None:
        """Should refuse N <= 0."""
        with pytest.raises(ValueError):
            monte_carlo_error(PAIR, nominal_total=0, trials=3)
