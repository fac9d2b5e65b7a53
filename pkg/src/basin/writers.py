"""
Image and table output for basin rasters.

PPM images shade the +1 basin red and the -1 basin blue, lightening with
the iteration count; the Julia set is white. CSV tables list one pixel per
row with its center, class and iteration count.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from numpy.typing import NDArray
from PIL import Image, UnidentifiedImageError

from src.basin.raster import BasinRaster
from src.dynamics.nonlinear_map import ConvergenceTag

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CSV_HEADER = ("re", "im", "class", "iterations")

# Lightness reached at max_iter; kept below 1 so converged pixels never turn white
MAX_LIGHTNESS = 0.85


class RasterIOError(Exception):
    """Raised when a raster file cannot be written or read."""

    def __init__(self, path: PathLike, reason: str):
        self.path = Path(path)
        super().__init__(f"{self.path}: {reason}")


@dataclass(frozen=True, eq=False)
class RasterTable:
    """
    Pixel data recovered from a CSV raster, shaped (height, width).

    Attributes:
        re: Real part of each pixel center
        im: Imaginary part of each pixel center
        codes: ConvergenceTag codes
        iterations: Iteration counts
    """

    re: NDArray[np.float64]
    im: NDArray[np.float64]
    codes: NDArray[np.int8]
    iterations: NDArray[np.int32]


def raster_to_rgb(raster: BasinRaster) -> NDArray[np.uint8]:
    """
    Color every pixel of raster.

    The hue channel stays saturated while the other two rise linearly from
    0 at iteration 0 to MAX_LIGHTNESS * 255 at max_iter.

    Returns:
        uint8 array of shape (height, width, 3)
    """
    shade = np.rint(255 * MAX_LIGHTNESS * raster.iterations / raster.max_iter).astype(np.uint8)
    rgb = np.full(raster.codes.shape + (3,), 255, dtype=np.uint8)

    plus = raster.codes == ConvergenceTag.PLUS_X.code
    minus = raster.codes == ConvergenceTag.MINUS_X.code
    rgb[plus, 1] = shade[plus]
    rgb[plus, 2] = shade[plus]
    rgb[minus, 0] = shade[minus]
    rgb[minus, 1] = shade[minus]
    return rgb


def classes_from_rgb(rgb: NDArray[np.uint8]) -> NDArray[np.int8]:
    """Recover ConvergenceTag codes from colors written by raster_to_rgb."""
    red, blue = rgb[..., 0], rgb[..., 2]
    codes = np.zeros(rgb.shape[:2], dtype=np.int8)
    codes[(red == 255) & (blue < 255)] = ConvergenceTag.PLUS_X.code
    codes[(blue == 255) & (red < 255)] = ConvergenceTag.MINUS_X.code
    return codes


def write_ppm(raster: BasinRaster, path: PathLike) -> Path:
    """
    Write raster as a binary PPM (P6, maxval 255).

    Raises:
        RasterIOError: If the file cannot be written
    """
    path = Path(path)
    image = Image.fromarray(raster_to_rgb(raster))
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        image.save(path, format="PPM")
    except OSError as e:
        logger.error(f"Failed to write PPM {path}: {e}")
        raise RasterIOError(path, f"cannot write PPM ({e})") from e

    logger.info(f"Wrote {raster.window.width}x{raster.window.height} PPM to {path}")
    return path


def read_ppm(path: PathLike) -> NDArray[np.uint8]:
    """
    Load a PPM as an RGB array of shape (height, width, 3).

    Raises:
        RasterIOError: If the file is missing or not a readable image
    """
    path = Path(path)
    try:
        with Image.open(path) as image:
            return np.asarray(image.convert("RGB"), dtype=np.uint8)
    except (OSError, UnidentifiedImageError) as e:
        raise RasterIOError(path, f"cannot read PPM ({e})") from e


def write_csv(raster: BasinRaster, path: PathLike) -> Path:
    """
    Write one row per pixel, row-major, under the header re,im,class,iterations.

    Coordinates use repr() so they read back exactly.

    Raises:
        RasterIOError: If the file cannot be written
    """
    path = Path(path)
    re = raster.window.column_centers()
    im = raster.window.row_centers()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_HEADER)
            for row in range(raster.window.height):
                for col in range(raster.window.width):
                    cell = raster.classification_at(row, col)
                    writer.writerow(
                        (
                            repr(float(re[col])),
                            repr(float(im[row])),
                            cell.tag.value,
                            cell.iterations,
                        )
                    )
    except OSError as e:
        logger.error(f"Failed to write CSV {path}: {e}")
        raise RasterIOError(path, f"cannot write CSV ({e})") from e

    logger.info(f"Wrote {raster.codes.size} pixels to {path}")
    return path


def read_csv(path: PathLike) -> RasterTable:
    """
    Load a CSV written by write_csv.

    The width is the length of the leading run of rows sharing one
    imaginary part.

    Raises:
        RasterIOError: If the file is missing or malformed
    """
    path = Path(path)
    try:
        with path.open(newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            rows = list(reader)
    except OSError as e:
        raise RasterIOError(path, f"cannot read CSV ({e})") from e

    if header is None or tuple(header) != CSV_HEADER:
        raise RasterIOError(path, f"expected header {','.join(CSV_HEADER)}, got {header}")
    if not rows:
        raise RasterIOError(path, "no pixel rows")

    try:
        re = np.array([float(r[0]) for r in rows])
        im = np.array([float(r[1]) for r in rows])
        codes = np.array([ConvergenceTag(r[2]).code for r in rows], dtype=np.int8)
        iterations = np.array([int(r[3]) for r in rows], dtype=np.int32)
    except (ValueError, IndexError) as e:
        raise RasterIOError(path, f"malformed row ({e})") from e

    width = int(np.argmax(im != im[0])) or len(rows)
    if len(rows) % width:
        raise RasterIOError(path, f"{len(rows)} rows do not form a grid of width {width}")
    shape = (len(rows) // width, width)
    return RasterTable(
        re=re.reshape(shape),
        im=im.reshape(shape),
        codes=codes.reshape(shape),
        iterations=iterations.reshape(shape),
    )
