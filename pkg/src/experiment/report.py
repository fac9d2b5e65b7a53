"""
Machine-readable discrimination reports.

JSON schema:
    {
      "mode": "ideal" | "noisy",
      "initial": {"z1": [re, im] | "inf", "z2": [re, im] | "inf"},
      "shots_per_setting": int | null,
      "monte_carlo_trials": int | null,
      "seed": int | null,
      "iterations": [
        {"iteration": k, "overlap_theory": x, "overlap_sim": x | null,
         "error_bar": x | null, "p_success": [p1, p2], "cum_success": [c1, c2],
         "z1": [re, im], "z2": [re, im]},
        ...
      ]
    }

The point at infinity is written as the string "inf", so reports stay strict
JSON. CSV reports hold the
iteration table only. All floats carry 9 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from src.dynamics.point import ProjectivePoint
from src.experiment.discrimination import DiscriminationRecord, IterationRecord
from src.experiment.parsing import format_complex

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

INFINITY_TOKEN = "inf"

CSV_COLUMNS = (
    "iteration",
    "overlap_theory",
    "overlap_sim",
    "error_bar",
    "p_success_1",
    "p_success_2",
    "cum_success_1",
    "cum_success_2",
    "z1_re",
    "z1_im",
    "z2_re",
    "z2_im",
)


class ReportError(Exception):
    """Raised when a report cannot be written or read."""

    def __init__(self, path: PathLike, reason: str):
        self.path = Path(path)
        super().__init__(f"{self.path}: {reason}")


def _round(value: float) -> float:
    return float(f"{value:.9g}")


def _format(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.9g}"


def _point_to_json(p: ProjectivePoint) -> Union[List[float], str]:
    if p.is_infinite:
        return INFINITY_TOKEN
    return [_round(p.z.real), _round(p.z.imag)]


def _point_from_json(value: Union[Sequence[float], str]) -> ProjectivePoint:
    if value == INFINITY_TOKEN:
        return ProjectivePoint.infinity()
    if isinstance(value, str):
        raise ValueError(f"unknown point token {value!r}")
    return ProjectivePoint.from_complex(complex(value[0], value[1]))


def _iteration_to_json(row: IterationRecord) -> Dict[str, Any]:
    return {
        "iteration": row.iteration,
        "overlap_theory": _round(row.overlap_theory),
        "overlap_sim": None if row.overlap_sim is None else _round(row.overlap_sim),
        "error_bar": None if row.error_bar is None else _round(row.error_bar),
        "p_success": [_round(p) for p in row.p_success],
        "cum_success": [_round(c) for c in row.cum_success],
        "z1": _point_to_json(row.z[0]),
        "z2": _point_to_json(row.z[1]),
    }


def _iteration_from_json(data: Dict[str, Any]) -> IterationRecord:
    return IterationRecord(
        iteration=int(data["iteration"]),
        overlap_theory=float(data["overlap_theory"]),
        overlap_sim=None if data["overlap_sim"] is None else float(data["overlap_sim"]),
        error_bar=None if data["error_bar"] is None else float(data["error_bar"]),
        p_success=(float(data["p_success"][0]), float(data["p_success"][1])),
        cum_success=(float(data["cum_success"][0]), float(data["cum_success"][1])),
        z=(_point_from_json(data["z1"]), _point_from_json(data["z2"])),
    )


def record_to_dict(record: DiscriminationRecord) -> Dict[str, Any]:
    """The JSON document for record, with floats rounded to 9 significant digits."""
    return {
        "mode": record.mode,
        "initial": {
            "z1": _point_to_json(record.initial[0]),
            "z2": _point_to_json(record.initial[1]),
        },
        "shots_per_setting": record.shots_per_setting,
        "monte_carlo_trials": record.monte_carlo_trials,
        "seed": record.seed,
        "iterations": [_iteration_to_json(row) for row in record.iterations],
    }


def record_from_dict(data: Dict[str, Any]) -> DiscriminationRecord:
    return DiscriminationRecord(
        mode=str(data["mode"]),
        initial=(
            _point_from_json(data["initial"]["z1"]),
            _point_from_json(data["initial"]["z2"]),
        ),
        iterations=tuple(_iteration_from_json(row) for row in data["iterations"]),
        shots_per_setting=data.get("shots_per_setting"),
        monte_carlo_trials=data.get("monte_carlo_trials"),
        seed=data.get("seed"),
    )


def _csv_row(row: IterationRecord) -> List[str]:
    cells = [str(row.iteration)]
    cells += [_format(row.overlap_theory), _format(row.overlap_sim), _format(row.error_bar)]
    cells += [_format(p) for p in row.p_success]
    cells += [_format(c) for c in row.cum_success]
    for p in row.z:
        z = p.z
        cells += [_format(z.real), _format(z.imag)]
    return cells


def render_csv(record: DiscriminationRecord) -> str:
    """The CSV report as text."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in record.iterations:
        writer.writerow(_csv_row(row))
    return buffer.getvalue()


def render_json(record: DiscriminationRecord) -> str:
    """The JSON report as text."""
    return json.dumps(record_to_dict(record), indent=2, allow_nan=False) + "\n"


def emit_report(
    record: DiscriminationRecord,
    path: PathLike,
    output_format: str = "json",
) -> Path:
    """
    Write record to path as JSON or CSV.

    Args:
        record: Discrimination result
        path: Destination file; parent directories are created
        output_format: "json" or "csv"

    Returns:
        The written path

    Raises:
        ReportError: If the file cannot be written
    """
    if output_format == "json":
        text = render_json(record)
    elif output_format == "csv":
        text = render_csv(record)
    else:
        raise ValueError(f"Unknown report format {output_format!r}; use json or csv")

    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        logger.error(f"Failed to write report {path}: {e}")
        raise ReportError(path, f"cannot write report ({e})") from e

    logger.info(f"Wrote {output_format} report with {len(record.iterations)} row(s) to {path}")
    return path


def load_report(path: PathLike) -> DiscriminationRecord:
    """
    Read a JSON report back into a DiscriminationRecord.

    Raises:
        ReportError: If the file is missing or not a valid report
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as e:
        raise ReportError(path, f"cannot read report ({e})") from e
    except json.JSONDecodeError as e:
        raise ReportError(path, f"not valid JSON ({e})") from e

    try:
        return record_from_dict(data)
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ReportError(path, f"not a discrimination report ({e})") from e


def summarize(record: DiscriminationRecord) -> str:
    """Human-readable table of the overlaps per iteration."""
    lines = [
        f"{record.mode} discrimination of {format_complex(record.initial[0])} "
        f"and {format_complex(record.initial[1])}",
        f"{'k':>3}  {'theory':>10}  {'simulated':>17}  {'P1':>8}  {'P2':>8}",
    ]
    for row in record.iterations:
        if row.overlap_sim is None:
            simulated = "-"
        else:
            simulated = f"{row.overlap_sim:.4f} +- {row.error_bar or 0.0:.4f}"
        lines.append(
            f"{row.iteration:>3}  {row.overlap_theory:>10.6f}  {simulated:>17}  "
            f"{row.cum_success[0]:>8.4f}  {row.cum_success[1]:>8.4f}"
        )
    return "\n".join(lines)
