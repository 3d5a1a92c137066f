import argparse
import logging
import sys
from pathlib import Path
from typing import NoReturn, Optional, Sequence

from sysid.cli.commands import EXIT_USAGE, CliCommand, run_command
from sysid.cli.defaults import EXPERIMENT_MAP

__all__ = ["build_parser", "main", "parse_command"]

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class UsageError(Exception):
    def __init__(self, message: str, usage: str) -> None:
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises on bad input instead of exiting with status 2"""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message, self.format_usage())


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML (or .json) configuration file")
    common.add_argument("--out", type=Path, help="output directory, replaces [run].output_dir")
    common.add_argument("--seed", type=int, help="master seed, replaces [run].seed")
    common.add_argument("--delta", type=float, help="failure probability δ in (0, 1), replaces [run].delta")
    common.add_argument("--trials", type=int, help="Monte Carlo trials per horizon, replaces [run].trials")
    common.add_argument("--quiet", action="store_true", help="warnings and errors only, no progress bars")
    common.add_argument("-v", "--verbose", action="count", default=0, help="more logging, repeat for debug output")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="sysid", description="Finite-time identification of linear time-invariant systems")
    subparsers = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    subparsers.add_parser("simulate", parents=[common], help="simulate [run].T steps and write the trajectory")
    estimate = subparsers.add_parser("estimate", parents=[common], help="OLS estimate of a trajectory")
    estimate.add_argument("--trajectory", type=Path, help="trajectory written by `simulate`, else one is simulated")
    subparsers.add_parser("bounds", parents=[common], help="finite-time error bound of the configured system")
    experiment = subparsers.add_parser("experiment", parents=[common], help="run a Monte Carlo experiment")
    experiment.add_argument(
        "kind",
        nargs="?",
        choices=sorted(EXPERIMENT_MAP),
        help="experiment to run, defaults to [experiment].kind",
    )
    return parser


def parse_command(argv: Optional[Sequence[str]] = None) -> CliCommand:
    """
    Parse command line arguments

    Raises:
        UsageError: Unknown subcommand, flag or malformed value
    """
    namespace = build_parser().parse_args(argv)
    return CliCommand(
        subcommand=namespace.subcommand,
        kind=getattr(namespace, "kind", None),
        config_path=namespace.config,
        output_dir=namespace.out,
        seed=namespace.seed,
        delta=namespace.delta,
        trials=namespace.trials,
        trajectory=getattr(namespace, "trajectory", None),
        quiet=namespace.quiet,
        verbosity=namespace.verbose,
    )


def configure_logging(command: CliCommand) -> None:
    if command.quiet:
        level = logging.WARNING
    else:
        level = logging.DEBUG if command.verbosity else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        command = parse_command(argv)
    except UsageError as error:
        sys.stderr.write(f"{error.usage}sysid: error: {error}\n")
        return EXIT_USAGE
    configure_logging(command)
    return run_command(command)


if __name__ == "__main__":
    sys.exit(main())
