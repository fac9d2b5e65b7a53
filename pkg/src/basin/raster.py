"""
Basin-of-attraction rasters for the nonlinear map.

Each pixel of a complex-plane window is classified by the fixed point its
orbit approaches. Pixels are sampled at cell centers and rows run from
im_max at the top to im_min at the bottom, matching image orientation.
"""

from __future__ import annotations

import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from src.config import get_config
from src.dynamics.nonlinear_map import Classification, ConvergenceTag, classify_many

logger = logging.getLogger(__name__)

# Target number of row chunks per worker
CHUNKS_PER_WORKER = 4


@dataclass(frozen=True)
class Window:
    """
    A rectangle of the complex plane sampled on a pixel grid.

    Attributes:
        re_min: Left edge
        re_max: Right edge
        im_min: Bottom edge
        im_max: Top edge
        width: Pixel columns
        height: Pixel rows
    """

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    width: int
    height: int

    def __post_init__(self) -> None:
        bounds = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(math.isfinite(b) for b in bounds):
            raise ValueError(f"Window bounds must be finite, got {bounds}")
        if not self.re_min < self.re_max:
            raise ValueError(f"re_min must be below re_max, got {self.re_min} >= {self.re_max}")
        if not self.im_min < self.im_max:
            raise ValueError(f"im_min must be below im_max, got {self.im_min} >= {self.im_max}")
        if self.width < 1 or self.height < 1:
            raise ValueError(f"Window needs at least one pixel, got {self.width}x{self.height}")

    @classmethod
    def centered(cls, center: complex, half_width: float, width: int, height: int) -> Window:
        """Square window of side 2*half_width around center."""
        return cls(
            re_min=center.real - half_width,
            re_max=center.real + half_width,
            im_min=center.imag - half_width,
            im_max=center.imag + half_width,
            width=width,
            height=height,
        )

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    def column_centers(self) -> NDArray[np.float64]:
        """Real parts of the pixel centers, left to right."""
        j = np.arange(self.width, dtype=np.float64)
        return self.re_min + (self.re_max - self.re_min) * (2 * j + 1) / (2 * self.width)

    def row_centers(self, start: int = 0, stop: Optional[int] = None) -> NDArray[np.float64]:
        """Imaginary parts of the pixel centers for rows [start, stop), top to bottom."""
        stop = self.height if stop is None else stop
        i = np.arange(start, stop, dtype=np.float64)
        return self.im_max - (self.im_max - self.im_min) * (2 * i + 1) / (2 * self.height)

    def pixel_grid(self, start: int = 0, stop: Optional[int] = None) -> NDArray[np.complex128]:
        """Complex pixel centers for rows [start, stop), shaped (rows, width)."""
        re = self.column_centers()
        im = self.row_centers(start, stop)
        return re[np.newaxis, :] + 1j * im[:, np.newaxis]


@dataclass(frozen=True, eq=False)
class BasinRaster:
    """
    Classification of every pixel of a window.

    Attributes:
        window: The sampled window
        codes: ConvergenceTag codes, shape (height, width)
        iterations: Iteration counts, shape (height, width)
        max_iter: Iteration cap used for the render
    """

    window: Window
    codes: NDArray[np.int8]
    iterations: NDArray[np.int32]
    max_iter: int

    def __post_init__(self) -> None:
        if self.codes.shape != self.window.shape or self.iterations.shape != self.window.shape:
            raise ValueError(
                f"Raster arrays must have shape {self.window.shape}, "
                f"got {self.codes.shape} and {self.iterations.shape}"
            )
        if self.iterations.size and int(self.iterations.max()) > self.max_iter:
            raise ValueError("Raster holds iteration counts above max_iter")

    def classification_at(self, row: int, col: int) -> Classification:
        return Classification(
            tag=ConvergenceTag.from_code(int(self.codes[row, col])),
            iterations=int(self.iterations[row, col]),
        )

    @property
    def cells(self) -> List[Classification]:
        """Row-major list of per-pixel classifications."""
        return [
            self.classification_at(row, col)
            for row in range(self.window.height)
            for col in range(self.window.width)
        ]

    def fraction(self, tag: ConvergenceTag) -> float:
        """Share of pixels carrying tag."""
        return float(np.count_nonzero(self.codes == tag.code)) / self.codes.size


def _render_rows(
    window: Window,
    start: int,
    stop: int,
    tol: float,
    max_iter: int,
) -> Tuple[int, NDArray[np.int8], NDArray[np.int32]]:
    """Classify rows [start, stop) of window."""
    z = window.pixel_grid(start, stop)
    # same normalization as ProjectivePoint.from_complex
    norm = np.hypot(1.0, np.abs(z))
    codes, iterations = classify_many(1.0 / norm, z / norm, tol=tol, max_iter=max_iter)
    return start, codes, iterations


def _row_chunks(height: int, workers: int) -> List[Tuple[int, int]]:
    chunk = max(1, math.ceil(height / (workers * CHUNKS_PER_WORKER)))
    return [(start, min(start + chunk, height)) for start in range(0, height, chunk)]


def render_basin(
    window: Window,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    workers: Optional[int] = None,
) -> BasinRaster:
    """
    Classify every pixel center of window under the map.

    Rows are split into chunks; with more than one worker the chunks run in a
    process pool and are written back by row index, so the raster does not
    depend on the worker count.

    Args:
        window: Window to sample
        tol: Convergence tolerance (defaults to config)
        max_iter: Iteration cap (defaults to the basin config)
        workers: Process count; 0 means os.cpu_count() (defaults to config)

    Returns:
        BasinRaster for the window
    """
    map_config = get_config().map
    basin_config = get_config().basin
    tol = map_config.tolerance if tol is None else tol
    max_iter = basin_config.max_iter if max_iter is None else max_iter
    workers = basin_config.workers if workers is None else workers
    if workers < 0:
        raise ValueError(f"workers must be non-negative, got {workers}")
    if workers == 0:
        workers = os.cpu_count() or 1
    if tol <= 0:
        raise ValueError(f"Tolerance must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")

    codes = np.zeros(window.shape, dtype=np.int8)
    iterations = np.zeros(window.shape, dtype=np.int32)
    chunks = _row_chunks(window.height, workers)

    started = time.perf_counter()
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [
                executor.submit(_render_rows, window, start, stop, tol, max_iter)
                for start, stop in chunks
            ]
            for future in futures:
                start, chunk_codes, chunk_iterations = future.result()
                codes[start : start + chunk_codes.shape[0]] = chunk_codes
                iterations[start : start + chunk_iterations.shape[0]] = chunk_iterations
    else:
        for start, stop in chunks:
            _, codes[start:stop], iterations[start:stop] = _render_rows(
                window, start, stop, tol, max_iter
            )

    elapsed = time.perf_counter() - started
    logger.info(
        f"Rendered {window.width}x{window.height} basin raster in {elapsed:.2f}s "
        f"({workers} worker(s), {len(chunks)} chunk(s))"
    )
    return BasinRaster(window=window, codes=codes, iterations=iterations, max_iter=max_iter)
