"""Command-line entry point: `altgda <command> ...`."""

import argparse
import asyncio
import json
import logging
from pathlib import Path
from typing import Optional, Sequence

from ..errors import EXIT_OK, exit_code_for, ConfigError
from ..models.experiment import parse_vector_text
from .batch import BatchRunner
from .config_loader import load_experiment_from_yaml, write_example_config
from .presets import PRESETS
from .runner import ExperimentRunner, RunResult

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="altgda",
        description="Simulate and verify gradient descent-ascent in bilinear zero-sum games",
    )
    parser.add_argument("--log-level", default="info", help="Log level")
    parser.add_argument("--output-dir", type=Path, default=None, help="Override the output root")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", type=Path, help="Experiment YAML file")
        return p

    with_config("run", "Rollout, metrics and bounds/recurrence report")
    with_config("simulate", "Rollout and write trajectory and metrics CSVs")
    p = with_config("regret", "Regret against a fixed strategy at every horizon")
    p.add_argument("--fixed", default=None, help="Comparator vector, e.g. '0' or '1, 2'")
    with_config("invariants", "Per-step energy/payoff identity residuals")
    with_config("bounds", "Step-size safety certificate and orbit bound check")
    p = with_config("recurrence", "Near-returns to the initial state")
    p.add_argument("--epsilon", type=float, default=None, help="Return radius")
    p = with_config("volume", "Hull area of a point cloud over time")
    p.add_argument("--cloud", type=Path, default=None, help="Point file, one 'x1, x2' per line")

    p = sub.add_parser("figures", help="Reproduce a figure preset")
    p.add_argument("preset", choices=sorted(PRESETS), help="Preset name")

    p = sub.add_parser("batch", help="Run many configs concurrently")
    p.add_argument("configs", type=Path, nargs="+", help="Experiment YAML files")
    p.add_argument("--jobs", type=int, default=1, help="Maximum concurrent runs")

    p = sub.add_parser("init-config", help="Write an example experiment config")
    p.add_argument("path", type=Path, help="Where to write the YAML file")
    return parser


def _print_results(results: Sequence[RunResult]) -> None:
    for r in results:
        line = f"{r.name} [{r.command}]: {r.status.value}"
        if r.error:
            line += f" - {r.error}"
        print(line)
        if r.files:
            print(f"  files: {', '.join(r.files)}")
        if r.summary:
            print("  " + json.dumps(r.summary, sort_keys=True, default=str))


def _worst_exit_code(results: Sequence[RunResult]) -> int:
    codes = [r.exit_code for r in results] or [EXIT_OK]
    return max(codes)


def dispatch(args: argparse.Namespace) -> int:
    """Execute a parsed command and return its exit code."""
    runner = ExperimentRunner(output_root=args.output_dir)

    if args.command == "init-config":
        write_example_config(args.path)
        print(f"Wrote {args.path}")
        return EXIT_OK
    if args.command == "figures":
        results = runner.figures(args.preset)
    elif args.command == "batch":
        batch = BatchRunner(runner, max_concurrent_jobs=args.jobs)
        results = asyncio.run(batch.run_paths(args.configs))
    else:
        config = load_experiment_from_yaml(args.config)
        if args.command == "run":
            results = [runner.run(config)]
        elif args.command == "simulate":
            results = [runner.simulate(config)]
        elif args.command == "regret":
            fixed = parse_vector_text(args.fixed) if args.fixed is not None else None
            results = [runner.regret(config, fixed)]
        elif args.command == "invariants":
            results = [runner.invariants(config)]
        elif args.command == "bounds":
            results = [runner.bounds(config)]
        elif args.command == "recurrence":
            results = [runner.recurrence(config, args.epsilon)]
        else:
            results = [runner.volume(config, args.cloud)]

    _print_results(results)
    return _worst_exit_code(results)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, configure logging and run the command."""
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        return dispatch(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        print(f"error: {e}")
        return exit_code_for(e)
    except ValueError as e:
        logger.error(f"Invalid argument: {e}")
        print(f"error: {e}")
        return exit_code_for(ConfigError(str(e)))


if __name__ == "__main__":
    raise SystemExit(main())
