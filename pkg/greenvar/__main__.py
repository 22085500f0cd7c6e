#!/usr/bin/env python3
"""
Command-line entry point for greenvar

    python -m greenvar estimate data.csv --alpha 0.05 -o out.csv
    python -m greenvar simulate --n 500 --reps 4000 --censor uniform:3.0 --seed 42
    python -m greenvar plot data.csv -o figures/
    python -m greenvar schema -o schemas/
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import ValidationError

from greenvar.config import Settings, load_settings
from greenvar.errors import (
    DatasetUnreadable,
    EmptyDataset,
    GreenvarError,
    InvalidAlpha,
    InvalidBins,
    InvalidConfig,
    InvalidRecord,
)
from greenvar.estimators.curve import build_curve, summarize
from greenvar.exporter.estimate_exporter import EstimateExporter, build_export
from greenvar.exporter.plotter import CurvePlotter
from greenvar.lifetable.builder import build_risk_table
from greenvar.lifetable.dataset_io import decode, file_checksum, parse_records, read_bytes, write_records
from greenvar.models.schema import CensorSpec, SimConfig, save_schema
from greenvar.simulation.generator import leader_like_dataset
from greenvar.simulation.runner import run_validation

logger = logging.getLogger("greenvar")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_UNREADABLE = 2
EXIT_MALFORMED = 3
EXIT_USAGE = 64


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit 64"""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _eval_times(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated times, got {text!r}") from None


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="greenvar", description="Kaplan-Meier, Greenwood and R-hat estimation")
    parser.add_argument("--config", "-c", default=None, help="Path to YAML configuration file")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging on stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def curve_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("input", help="CSV dataset with a time,status header")
        p.add_argument("--alpha", type=float, default=None, help="Interval level is 1 - alpha")
        p.add_argument("--convention", choices=("paper", "two_sided"), default=None,
                       help="Quantile at 1 - alpha (paper) or 1 - alpha/2 (two_sided)")
        p.add_argument("--clamp", action="store_true", default=None, help="Floor lower bounds at 0")

    est = sub.add_parser("estimate", help="Write the estimate table for a dataset")
    curve_flags(est)
    est.add_argument("--format", choices=("csv", "json"), default=None, help="Output format")
    est.add_argument("--output", "-o", default=None, help="Output file")

    sim = sub.add_parser("simulate", help="Run the Monte Carlo validation")
    sim.add_argument("--n", type=int, default=None, help="Subjects per replication")
    sim.add_argument("--reps", type=int, default=None, help="Number of replications")
    sim.add_argument("--event-rate", type=float, default=None, help="Exponential event rate")
    sim.add_argument("--censor", default=None, help="uniform:<max> | exponential:<rate> | none")
    sim.add_argument("--seed", type=int, default=None, help="Master seed")
    sim.add_argument("--eval-times", type=_eval_times, default=None, help="Comma-separated times")
    sim.add_argument("--workers", type=int, default=None, help="Process pool size")
    sim.add_argument("--output", "-o", default=None, help="Report JSON file")
    sim.add_argument("--emit-dataset", metavar="PATH", default=None,
                     help="Write the large synthetic trial-like dataset to PATH instead of simulating")

    plot = sub.add_parser("plot", help="Write SVG figures and plot points for a dataset")
    curve_flags(plot)
    plot.add_argument("--output", "-o", default=None, help="Output directory")

    schema = sub.add_parser("schema", help="Write the JSON Schemas of the exported documents")
    schema.add_argument("--output", "-o", default="schemas", help="Output directory")
    return parser


def _curve_options(args: argparse.Namespace, settings: Settings) -> Tuple[float, str, bool]:
    alpha = args.alpha if args.alpha is not None else settings.estimate.alpha
    convention = args.convention or settings.estimate.convention
    clamp = args.clamp if args.clamp is not None else settings.estimate.clamp
    return alpha, convention, clamp


def _load_curve(args: argparse.Namespace, settings: Settings):
    data = read_bytes(args.input)
    records = parse_records(decode(data, args.input))
    table = build_risk_table(records)
    alpha, convention, clamp = _curve_options(args, settings)
    curve = build_curve(table, alpha=alpha, convention=convention, clamp=clamp)
    horizon = max(r.time for r in records)
    return table, curve, file_checksum(data), horizon


def cmd_estimate(args: argparse.Namespace, settings: Settings) -> int:
    table, curve, checksum, _ = _load_curve(args, settings)
    fmt = args.format or settings.estimate.format
    exporter = EstimateExporter(settings.output.dir)
    path = exporter.export_estimate(build_export(table, curve, checksum), fmt, args.output)

    stats = summarize(table, curve)
    print(f"✅ {stats['event_times']} event times from {stats['subjects']} subjects written to {path}",
          file=sys.stderr)
    return EXIT_OK


def sim_config_from(args: argparse.Namespace, settings: Settings) -> SimConfig:
    defaults = settings.simulate
    censor_text = args.censor if args.censor is not None else defaults.censor
    try:
        censor = CensorSpec.parse(censor_text)
    except (ValueError, ValidationError) as e:
        raise InvalidConfig("censor", _reason(e)) from e

    fields = {
        "n": args.n if args.n is not None else defaults.n,
        "reps": args.reps if args.reps is not None else defaults.reps,
        "event_rate": args.event_rate if args.event_rate is not None else defaults.event_rate,
        "censor": censor,
        "seed": args.seed if args.seed is not None else defaults.seed,
        "eval_times": args.eval_times,
        "workers": args.workers if args.workers is not None else defaults.workers,
    }
    try:
        return SimConfig(**fields)
    except ValidationError as e:
        err = e.errors()[0]
        field = ".".join(str(part) for part in err["loc"]) or "config"
        raise InvalidConfig(field, _reason(e)) from e


def _reason(e: Exception) -> str:
    if isinstance(e, ValidationError):
        return e.errors()[0]["msg"].removeprefix("Value error, ")
    return str(e)


def cmd_simulate(args: argparse.Namespace, settings: Settings) -> int:
    if args.emit_dataset:
        seed = args.seed if args.seed is not None else settings.simulate.seed
        path = write_records(args.emit_dataset, leader_like_dataset(seed))
        print(f"✅ Synthetic dataset written to {path}", file=sys.stderr)
        return EXIT_OK

    config = sim_config_from(args, settings)
    report = run_validation(config)
    path = EstimateExporter(settings.output.dir).export_report(report, args.output)

    for p in report.points:
        print(f"t={p.t!r} ratio_g={_fmt(p.ratio_g)} ratio_r={_fmt(p.ratio_r)} "
              f"defined_count={p.defined_count}")
    print(f"✅ Report written to {path}", file=sys.stderr)
    return EXIT_OK


def _fmt(value: Optional[float]) -> str:
    return "null" if value is None else f"{value:.6f}"


def cmd_plot(args: argparse.Namespace, settings: Settings) -> int:
    _, curve, _, horizon = _load_curve(args, settings)
    out_dir = Path(args.output) if args.output else Path(settings.output.dir)
    written = CurvePlotter(out_dir, horizon=horizon).plot_all(curve)
    print(f"✅ {len(written)} files written to {out_dir}", file=sys.stderr)
    return EXIT_OK


def cmd_schema(args: argparse.Namespace, settings: Settings) -> int:
    paths = save_schema(args.output)
    print(f"✅ JSON Schemas written: {', '.join(str(p) for p in paths)}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "estimate": cmd_estimate,
    "simulate": cmd_simulate,
    "plot": cmd_plot,
    "schema": cmd_schema,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    try:
        settings = load_settings(args.config)
        return COMMANDS[args.command](args, settings)
    except DatasetUnreadable as e:
        return _fail(EXIT_UNREADABLE, e)
    except (EmptyDataset, InvalidRecord) as e:
        return _fail(EXIT_MALFORMED, e)
    except (InvalidAlpha, InvalidConfig, InvalidBins) as e:
        return _fail(EXIT_USAGE, e)
    except ValidationError as e:
        return _fail(EXIT_USAGE, _reason(e))
    except GreenvarError as e:
        return _fail(EXIT_FAILURE, e)
    except Exception as e:
        logger.debug("Unexpected failure", exc_info=True)
        return _fail(EXIT_FAILURE, e)


def _fail(code: int, error: object) -> int:
    logger.error(f"{error}")
    print(f"❌ {error}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
