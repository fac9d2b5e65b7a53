"""
Basin module for NLQ-Sim.
Parallel basin-of-attraction rasters and their PPM / CSV files.
"""

from src.basin.raster import BasinRaster, Window, render_basin
from src.basin.writers import (
    RasterIOError,
    RasterTable,
    classes_from_rgb,
    raster_to_rgb,
    read_csv,
    read_ppm,
    write_csv,
    write_ppm,
)

__all__ = [
    "Window",
    "BasinRaster",
    "render_basin",
    "RasterIOError",
    "RasterTable",
    "raster_to_rgb",
    "classes_from_rgb",
    "write_ppm",
    "read_ppm",
    "write_csv",
    "read_csv",
]
