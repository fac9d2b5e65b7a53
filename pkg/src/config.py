"""
NLQ-Sim Configuration Module.

Centralizes all configuration settings with environment variable support.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _get_env(key: str, default: Optional[str] = None) -> str:
    """Get environment variable with optional default."""
    value = os.getenv(key, default)
    if value is None:
        raise ValueError(f"Environment variable {key} is not set and no default provided")
    return value


def _get_env_bool(key: str, default: bool = False) -> bool:
    """Get boolean environment variable."""
    return os.getenv(key, str(default)).lower() in ("true", "1", "yes")


def _get_env_int(key: str, default: int) -> int:
    """Get integer environment variable."""
    raw = os.getenv(key, str(default))
    try:
        return int(raw)
    except ValueError as e:
        raise ValueError(f"Environment variable {key} must be an integer, got {raw!r}") from e


def _get_env_float(key: str, default: float) -> float:
    """Get float environment variable."""
    raw = os.getenv(key, repr(default))
    try:
        return float(raw)
    except ValueError as e:
        raise ValueError(f"Environment variable {key} must be a number, got {raw!r}") from e


def parse_window(text: str) -> Tuple[float, float, float, float]:
    """
    Parse a complex-plane window of the form "re_min,re_max,im_min,im_max".

    Args:
        text: Comma-separated bounds

    Returns:
        Tuple (re_min, re_max, im_min, im_max)

    Raises:
        ValueError: If the text does not hold four numbers
    """
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError(f"Window must have four comma-separated bounds, got {text!r}")
    try:
        re_min, re_max, im_min, im_max = (float(p) for p in parts)
    except ValueError as e:
        raise ValueError(f"Window bounds must be numbers, got {text!r}") from e
    return re_min, re_max, im_min, im_max


def parse_resolution(text: str) -> Tuple[int, int]:
    """
    Parse a raster resolution of the form "WIDTHxHEIGHT".

    Args:
        text: Resolution string such as "1000x1000"

    Returns:
        Tuple (width, height)

    Raises:
        ValueError: If the text is not two positive integers joined by 'x'
    """
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ValueError(f"Resolution must look like WIDTHxHEIGHT, got {text!r}")
    try:
        width, height = int(parts[0]), int(parts[1])
    except ValueError as e:
        raise ValueError(f"Resolution must look like WIDTHxHEIGHT, got {text!r}") from e
    if width < 1 or height < 1:
        raise ValueError(f"Resolution must be positive, got {text!r}")
    return width, height


@dataclass(frozen=True)
class MapConfig:
    """Iteration and comparison tolerances for the nonlinear map."""

    tolerance: float = field(default_factory=lambda: _get_env_float("NLQ_TOLERANCE", 1e-6))
    max_iter: int = field(default_factory=lambda: _get_env_int("NLQ_MAX_ITER", 100))
    equality_tol: float = field(
        default_factory=lambda: _get_env_float("NLQ_EQUALITY_TOL", 1e-9)
    )


@dataclass(frozen=True)
class BasinConfig:
    """Basin raster defaults."""

    window: Tuple[float, float, float, float] = field(
        default_factory=lambda: parse_window(_get_env("NLQ_BASIN_WINDOW", "-2,2,-2,2"))
    )
    resolution: Tuple[int, int] = field(
        default_factory=lambda: parse_resolution(_get_env("NLQ_BASIN_RESOLUTION", "1000x1000"))
    )
    max_iter: int = field(default_factory=lambda: _get_env_int("NLQ_BASIN_MAX_ITER", 50))
    workers: int = field(default_factory=lambda: _get_env_int("NLQ_BASIN_WORKERS", 0))


@dataclass(frozen=True)
class TomographyConfig:
    """Tomography and Monte-Carlo settings."""

    shots: int = field(default_factory=lambda: _get_env_int("NLQ_SHOTS", 12000))
    trials: int = field(default_factory=lambda: _get_env_int("NLQ_TRIALS", 100))
    mle_max_iter: int = field(default_factory=lambda: _get_env_int("NLQ_MLE_MAX_ITER", 10000))
    mle_tol: float = field(default_factory=lambda: _get_env_float("NLQ_MLE_TOL", 1e-12))
    mc_workers: int = field(default_factory=lambda: _get_env_int("NLQ_MC_WORKERS", 1))


@dataclass(frozen=True)
class AppConfig:
    """Application-level configuration."""

    log_level: str = field(default_factory=lambda: _get_env("LOG_LEVEL", "INFO"))
    debug: bool = field(default_factory=lambda: _get_env_bool("DEBUG", False))
    output_dir: Path = field(
        default_factory=lambda: Path(_get_env("NLQ_OUTPUT_DIR", "./output"))
    )

    # Sub-configurations
    map: MapConfig = field(default_factory=MapConfig)
    basin: BasinConfig = field(default_factory=BasinConfig)
    tomography: TomographyConfig = field(default_factory=TomographyConfig)


# Global configuration instance
def get_config() -> AppConfig:
    """Get the application configuration."""
    return AppConfig()
