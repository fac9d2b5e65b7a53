"""
NLQ-Sim: Nonlinear Qubit Simulator

Main entry point for the application.
Supports CLI commands for single protocol steps, discrimination runs,
basin rendering, tomography round trips and success-probability sweeps.

Negative complex values such as -0.2-0.1i are accepted anywhere, e.g.
`main.py discriminate --pair 0.2 -0.2-0.1i` or `main.py step -0.2-0.1i`.
"""

import argparse
import logging
import re
import sys
from pathlib import Path

from src import __version__
from src.circuit.optics import PreparationError
from src.config import get_config, parse_resolution
from src.tomography.estimator import TomographyError

# A minus sign, a digit, and a trailing imaginary unit: a value, never an option
NEGATIVE_COMPLEX = re.compile(r"^-\d[\w.+\-]*[ij]$", re.IGNORECASE)


def protect_negative_complex(argv: list[str]) -> list[str]:
    """Prefix negative complex tokens with a space so argparse reads them as values."""
    return [f" {token}" if NEGATIVE_COMPLEX.match(token) else token for token in argv]


def setup_logging(log_level: str) -> None:
    """Configure application logging."""
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.StreamHandler(sys.stdout),
        ],
    )


def cmd_step(args: argparse.Namespace) -> int:
    """Handle the step command."""
    from src.circuit.optics import invert_preparation
    from src.circuit.protocol import run_protocol
    from src.dynamics.nonlinear_map import classify, iterate
    from src.experiment.parsing import format_complex, parse_complex

    p = parse_complex(args.z)
    trajectory = iterate(p, args.steps)
    outcomes = run_protocol(p, args.steps)
    theta_q, theta_h = invert_preparation(p)
    verdict = classify(p)

    print(f"z0 = {format_complex(p)}  (QWP {theta_q:.6f} rad, HWP {theta_h:.6f} rad)")
    for k, outcome in enumerate(outcomes, start=1):
        mismatch = outcome.selected_point.distance(trajectory.points[k])
        print(
            f"z{k} = {format_complex(trajectory.points[k])}  "
            f"P = {outcome.selected_probability:.6f}  circuit/map distance {mismatch:.2e}"
        )
    print(f"Converges to: {verdict.tag.value} after {verdict.iterations} iteration(s)")
    return 0


def cmd_discriminate(args: argparse.Namespace) -> int:
    """Handle the discriminate command."""
    from src.experiment.discrimination import (
        ExperimentConfig,
        iterations_to_overlap,
        run_discrimination,
    )
    from src.experiment.report import emit_report, summarize

    logger = logging.getLogger(__name__)

    overrides = {
        "iterations": args.iterations,
        "mode": args.mode,
        "shots_per_setting": args.shots,
        "monte_carlo_trials": args.trials,
        "seed": args.seed,
        "output_format": args.format,
        "workers": args.workers,
    }
    if args.preset:
        config = ExperimentConfig.from_preset(args.preset, **overrides)
    elif args.pair:
        fields = {k: v for k, v in overrides.items() if v is not None}
        fields.setdefault("iterations", 3)
        config = ExperimentConfig(z1=args.pair[0], z2=args.pair[1], **fields)
    else:
        logger.error("discriminate needs --pair Z1 Z2 or --preset NAME")
        return 1

    record = run_discrimination(config)
    print(summarize(record))

    if args.target is not None:
        reached = iterations_to_overlap(config.pair, args.target)
        if reached is None:
            print(f"Overlap {args.target} is not reached within 50 iterations")
        else:
            print(
                f"Overlap < {args.target} after {reached.iterations} iteration(s), "
                f"success probabilities {reached.cum_success[0]:.6f} / {reached.cum_success[1]:.6f}"
            )

    if args.out:
        emit_report(record, Path(args.out), config.output_format)
    return 0


def cmd_basin(args: argparse.Namespace) -> int:
    """Handle the basin command."""
    from src.basin.raster import Window, render_basin
    from src.basin.writers import write_csv, write_ppm
    from src.dynamics.nonlinear_map import ConvergenceTag

    config = get_config()
    re_min, re_max, im_min, im_max = args.window or config.basin.window
    if args.resolution:
        width, height = parse_resolution(args.resolution)
    else:
        width, height = config.basin.resolution
    window = Window(re_min, re_max, im_min, im_max, width, height)

    raster = render_basin(window, tol=args.tol, max_iter=args.max_iter, workers=args.workers)
    out = Path(args.out) if args.out else config.output_dir / "basin.ppm"
    write_ppm(raster, out)
    if args.csv:
        write_csv(raster, Path(args.csv))

    for tag in ConvergenceTag:
        print(f"{tag.value:>8}: {100 * raster.fraction(tag):6.2f}% of pixels")
    print(f"Image written to {out}")
    return 0


def cmd_tomo(args: argparse.Namespace) -> int:
    """Handle the tomo command."""
    import numpy as np

    from src.experiment.parsing import format_complex, parse_complex
    from src.tomography.estimator import DEFAULT_BASES, purity, simulate_tomography, state_fidelity
    from src.tomography.montecarlo import monte_carlo_error

    config = get_config().tomography
    p = parse_complex(args.z)
    shots = args.shots or config.shots
    run = simulate_tomography(p, shots, np.random.SeedSequence(args.seed))

    counts = ", ".join(f"{label}={n}" for label, n in zip(DEFAULT_BASES.labels, run.record.counts))
    print(f"True state:     z = {format_complex(p)}")
    print(f"Counts:         {counts}")
    print(f"Estimate:       z = {format_complex(run.estimate)}")
    print(f"Fidelity:       {state_fidelity(run.rho, p):.6f}")
    print(f"Purity:         {purity(run.rho):.6f}")

    if args.trials:
        summary = monte_carlo_error(
            (p, p), shots, args.trials, rng_seed=args.seed, workers=args.workers
        )
        print(f"Self-overlap:   {summary.mean:.6f} +- {summary.std:.6f} ({summary.failed} failed)")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    """Handle the sweep command."""
    from src.dynamics.nonlinear_map import bloch_coords, iterate
    from src.experiment.parsing import format_complex, parse_complex

    p = parse_complex(args.z)
    trajectory = iterate(p, args.iterations)
    cumulative = trajectory.cumulative_probabilities()

    print(f"{'k':>3}  {'z':>28}  {'P(step)':>9}  {'P(all)':>9}  {'bloch x':>8}")
    for k, probability in enumerate(trajectory.step_probabilities):
        point = trajectory.points[k]
        print(
            f"{k + 1:>3}  {format_complex(point):>28}  {probability:>9.6f}  "
            f"{cumulative[k]:>9.6f}  {bloch_coords(point)[0]:>8.4f}"
        )
    print(f"Final state: z = {format_complex(trajectory.final)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per cmd_* handler."""
    from src.experiment.discrimination import PRESETS

    parser = argparse.ArgumentParser(
        description="NLQ-Sim: measurement-induced nonlinear qubit dynamics and state discrimination"
    )
    parser.add_argument("--debug", action="store_true", help="Enable debug mode")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # Step command
    step_parser = subparsers.add_parser("step", help="Run protocol steps on one state")
    step_parser.add_argument("z", type=str, help="State parameter, e.g. 0.2, 0.1+0.3i, 0.2@45")
    step_parser.add_argument("--steps", "-n", type=int, default=1, help="Number of steps")

    # Discriminate command
    disc_parser = subparsers.add_parser(
        "discriminate", help="Iterate the protocol on a pair and track the overlap"
    )
    disc_parser.add_argument("--pair", nargs=2, metavar=("Z1", "Z2"), help="Initial pair")
    disc_parser.add_argument("--preset", choices=sorted(PRESETS), help="Named initial pair")
    disc_parser.add_argument("--iterations", "-k", type=int, help="Number of iterations")
    disc_parser.add_argument("--mode", choices=["ideal", "noisy"], help="Pipeline (default ideal)")
    disc_parser.add_argument("--shots", type=int, help="Counts per analyzer setting")
    disc_parser.add_argument("--trials", type=int, help="Monte-Carlo trials per error bar")
    disc_parser.add_argument("--seed", type=int, help="Master seed (required for noisy mode)")
    disc_parser.add_argument("--out", type=str, help="Report file")
    disc_parser.add_argument("--format", choices=["json", "csv"], help="Report format")
    disc_parser.add_argument("--workers", type=int, help="Monte-Carlo worker processes")
    disc_parser.add_argument("--target", type=float, help="Report iterations to reach this overlap")

    # Basin command
    basin_parser = subparsers.add_parser("basin", help="Render the basins of attraction")
    basin_parser.add_argument(
        "--window",
        nargs=4,
        type=float,
        metavar=("RMIN", "RMAX", "IMIN", "IMAX"),
        help="Complex-plane window",
    )
    basin_parser.add_argument("--resolution", type=str, help="Raster size as WIDTHxHEIGHT")
    basin_parser.add_argument("--max-iter", type=int, help="Iteration cap per pixel")
    basin_parser.add_argument("--tol", type=float, help="Convergence tolerance")
    basin_parser.add_argument("--workers", type=int, help="Worker processes (0 = all cores)")
    basin_parser.add_argument("--out", type=str, help="PPM output path")
    basin_parser.add_argument("--csv", type=str, help="Optional CSV output path")

    # Tomo command
    tomo_parser = subparsers.add_parser("tomo", help="Simulate one tomography round trip")
    tomo_parser.add_argument("z", type=str, help="State parameter")
    tomo_parser.add_argument("--shots", type=int, help="Counts per analyzer setting")
    tomo_parser.add_argument("--seed", type=int, default=0, help="Seed for the count noise")
    tomo_parser.add_argument("--trials", type=int, help="Also estimate the Monte-Carlo spread")
    tomo_parser.add_argument("--workers", type=int, help="Monte-Carlo worker processes")

    # Sweep command
    sweep_parser = subparsers.add_parser(
        "sweep", help="Success probabilities along a trajectory"
    )
    sweep_parser.add_argument("z", type=str, help="State parameter")
    sweep_parser.add_argument("--iterations", "-k", type=int, default=6, help="Number of steps")

    return parser


def main(argv: list[str] | None = None) -> int:
    """
    Main entry point for NLQ-Sim.

    Returns:
        Exit code (0 for success, non-zero for errors)
    """
    from src.basin.writers import RasterIOError
    from src.experiment.discrimination import ExperimentError
    from src.experiment.report import ReportError

    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(protect_negative_complex(argv))

    # Setup
    config = get_config()
    log_level = "DEBUG" if args.debug or config.debug else config.log_level
    setup_logging(log_level)

    logger = logging.getLogger(__name__)
    logger.info(f"Starting NLQ-Sim v{__version__}")

    handlers = {
        "step": cmd_step,
        "discriminate": cmd_discriminate,
        "basin": cmd_basin,
        "tomo": cmd_tomo,
        "sweep": cmd_sweep,
    }
    handler = handlers.get(args.command)
    if handler is None:
        parser.print_help()
        return 0

    # Route to command handler
    try:
        return handler(args)
    except (
        ExperimentError,
        TomographyError,
        PreparationError,
        RasterIOError,
        ReportError,
        ValueError,
    ) as e:
        logger.error(f"{args.command} failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
