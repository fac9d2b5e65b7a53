"""
Experiment module for NLQ-Sim.
Discrimination runs over the iterated protocol, input parsing and reports.
"""

from src.experiment.discrimination import (
    PRESETS,
    DiscriminationRecord,
    ExperimentConfig,
    ExperimentError,
    IterationRecord,
    OverlapTarget,
    Preset,
    iterations_to_overlap,
    run_discrimination,
)
from src.experiment.parsing import ComplexParseError, format_complex, parse_complex
from src.experiment.report import ReportError, emit_report, load_report, summarize

__all__ = [
    "ExperimentConfig",
    "ExperimentError",
    "DiscriminationRecord",
    "IterationRecord",
    "OverlapTarget",
    "Preset",
    "PRESETS",
    "run_discrimination",
    "iterations_to_overlap",
    "ComplexParseError",
    "parse_complex",
    "format_complex",
    "ReportError",
    "emit_report",
    "load_report",
    "summarize",
]
