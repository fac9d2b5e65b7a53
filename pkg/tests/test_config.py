"""
Tests for the configuration module.
"""

from pathlib import Path

import pytest

from src.config import (
    AppConfig,
    BasinConfig,
    MapConfig,
    TomographyConfig,
    get_config,
    parse_resolution,
    parse_window,
)


class TestMapConfig:
    """Tests for map configuration."""

    def test_default_values(self) -> None:
        """Should have the documented defaults."""
        config = MapConfig()

        assert config.tolerance == 1e-6
        assert config.max_iter == 100
        assert config.equality_tol == 1e-9

    def test_respects_environment_variables(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Should read from environment variables."""
        monkeypatch.setenv("NLQ_TOLERANCE", "1e-8")
        monkeypatch.setenv("NLQ_MAX_ITER", "250")

        config = MapConfig()

        assert config.tolerance == 1e-8
        assert config.max_iter == 250

    def test_rejects_non_numeric_values(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Should name the variable when a value is malformed."""
        monkeypatch.setenv("NLQ_MAX_ITER", "lots")

        with pytest.raises(ValueError, match="NLQ_MAX_ITER"):
            MapConfig()


class TestBasinConfig:
    """Tests for basin configuration."""

    def test_default_window_and_resolution(self) -> None:
        """Should cover [-2, 2] x [-2, 2] at 1000x1000."""
        config = BasinConfig()

        assert config.window == (-2.0, 2.0, -2.0, 2.0)
        assert config.resolution == (1000, 1000)
        assert config.max_iter == 50
        assert config.workers == 0

    def test_reads_window_from_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Should parse the window string from the environment."""
        monkeypatch.setenv("NLQ_BASIN_WINDOW", "-1, 1, -0.5, 0.5")
        monkeypatch.setenv("NLQ_BASIN_RESOLUTION", "64x32")

        config = BasinConfig()

        assert config.window == (-1.0, 1.0, -0.5, 0.5)
        assert config.resolution == (64, 32)


class TestTomographyConfig:
    """Tests for tomography configuration."""

    def test_default_values(self) -> None:
        """Should default to 12,000 counts and 100 trials."""
        config = TomographyConfig()

        assert config.shots == 12000
        assert config.trials == 100
        assert config.mle_max_iter == 10000
        assert config.mle_tol == 1e-12
        assert config.mc_workers == 1


class TestParsers:
    """Tests for the window and resolution parsers."""

    def test_parse_window(self) -> None:
        """Should return four floats in order."""
        assert parse_window("-2,2,-1.5,1.5") == (-2.0, 2.0, -1.5, 1.5)

    @pytest.mark.parametrize("text", ["1,2,3", "a,b,c,d", ""])
    def test_parse_window_rejects_malformed(self, text: str) -> None:
        """Should reject anything but four numbers."""
        with pytest.raises(ValueError):
            parse_window(text)

    def test_parse_resolution(self) -> None:
        """Should split WIDTHxHEIGHT."""
        assert parse_resolution("1000x800") == (1000, 800)
        assert parse_resolution("3X3") == (3, 3)

    @pytest.mark.parametrize("text", ["1000", "0x10", "ax3", "10x-1"])
    def test_parse_resolution_rejects_malformed(self, text: str) -> None:
        """Should reject malformed or non-positive sizes."""
        with pytest.raises(ValueError):
            parse_resolution(text)


class TestAppConfig:
    """Tests for main application configuration."""

    def test_contains_all_sub_configs(self) -> None:
        """Should contain all sub-configuration objects."""
        config = AppConfig()

        assert isinstance(config.map, MapConfig)
        assert isinstance(config.basin, BasinConfig)
        assert isinstance(config.tomography, TomographyConfig)

    def test_default_log_level(self) -> None:
        """Should have INFO as default log level."""
        config = AppConfig()

        assert config.log_level == "INFO"

    def test_debug_disabled_by_default(self) -> None:
        """Should have debug disabled by default."""
        config = AppConfig()

        assert config.debug is False

    def test_default_output_dir(self) -> None:
        """Should write artifacts under ./output by default."""
        config = AppConfig()

        assert config.output_dir == Path("./output")


class TestGetConfig:
    """Tests for the get_config function."""

    def test_returns_app_config(self) -> None:
        """Should return an AppConfig instance."""
        config = get_config()

        assert isinstance(config, AppConfig)
