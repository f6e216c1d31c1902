"""
Command line front end.

Examples:
    .. code-block:: console

        $ orbithull torus-analyze --config torus.toml --json -
        $ orbithull orbit-defect --config sphere.toml --seed 7 --samples 200000 --strict
        $ orbithull fixtures -v

Exit codes: 0 on success, 1 on a failed run or fixture mismatch, 2 on invalid
input, 3 on an inconclusive verdict under ``--strict``.
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from orbithull import __version__
from orbithull.lib import mp
from orbithull.lib.config import ExperimentConfig, load_config, parse_config
from orbithull.lib.error import ExecuteError, OrbitHullError, ValidationError
from orbithull.lib.report import ReportEnvelope
from orbithull.toolbox import TOOLS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3

_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="random seed, an unsigned 64-bit integer")
    common.add_argument("--samples", type=int, help="Haar samples per estimate")
    common.add_argument("--degree-bound", type=int, help="largest monomial degree")
    common.add_argument("--strict", action="store_true", help="exit 3 when a verdict is inconclusive")
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH, '-' for standard output")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug output")

    parser = argparse.ArgumentParser(
        prog="orbithull", description="Antisymmetry, nilpotent cone and hull tools for compact group orbits."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    for name, tool in TOOLS.items():
        sub = commands.add_parser(name, parents=[common], help=tool.description, description=tool.description)
        sub.add_argument(
            "--config",
            metavar="PATH",
            required=name != "fixtures",
            help="TOML experiment configuration",
        )

    return parser


def _load(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config) if args.config else parse_config("", source="<defaults>")

    return config.with_overrides(args.seed, args.samples, args.degree_bound, args.json)


def _emit(envelope: ReportEnvelope, path: Optional[str]) -> None:
    text = envelope.to_json()
    if path == "-":
        sys.stdout.write(text + "\n")
    elif path:
        Path(path).write_text(text + "\n", encoding="utf-8")
        logger.info("report written to %s", path)


def run(args: argparse.Namespace) -> int:
    """
    Runs one parsed command and returns its exit code.
    """
    try:
        config = _load(args)
        threads = mp.thread_count()
    except ValidationError as err:
        print(f"orbithull: error: {err}", file=sys.stderr)
        return EXIT_INVALID

    est = config.estimation
    envelope = ReportEnvelope.new(args.command, config.echo(), est.seed, est.samples, est.degree_bound, threads)
    tool = TOOLS[args.command]()

    start = time.perf_counter()
    try:
        result = tool.execute(config)
    except ExecuteError as err:
        print(f"orbithull: error: {err}", file=sys.stderr)
        return err.exit_code
    envelope.provenance["wall_time_s"] = round(time.perf_counter() - start, 6)

    envelope.verdicts = result.verdicts
    for w in result.warnings:
        logger.warning(w)
        envelope.warn(w)

    summary = sys.stderr if config.output == "-" else sys.stdout
    for line in result.summary:
        print(line, file=summary)

    try:
        _emit(envelope, config.output)
    except (OSError, OrbitHullError) as err:
        print(f"orbithull: cannot write report: {err}", file=sys.stderr)
        return EXIT_FAILED

    if result.failed:
        return EXIT_FAILED
    if result.inconclusive and args.strict:
        return EXIT_INCONCLUSIVE

    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_INVALID

    logging.basicConfig(
        level=_LEVELS[min(args.verbose, len(_LEVELS) - 1)],
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    return run(args)


if __name__ == "__main__":
    sys.exit(main())
