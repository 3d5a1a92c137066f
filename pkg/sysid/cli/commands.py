import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, Protocol

import numpy as np

from sysid.bounds.regime import regime_error_bound
from sysid.cli.config import RunConfig, dump_config, parse_config
from sysid.cli.defaults import EXPERIMENT_MAP
from sysid.cli.outputs import write_json_artifact, write_outputs
from sysid.errors import (
    ArtifactIOError,
    ConfigError,
    DimensionError,
    NumericError,
    OverflowRiskError,
    PreconditionError,
    RegimeError,
)
from sysid.estimation.diagnostics import explosive_pair, selfnorm_statistic
from sysid.estimation.ols import covariance_and_martingale, ols_estimate
from sysid.experiments.concentration import concentration_suite
from sysid.experiments.inconsistency import run_inconsistency
from sysid.experiments.rate import run_rate_sweep
from sysid.experiments.spectrum import run_spectrum_growth
from sysid.experiments.structure import run_structure_checks
from sysid.experiments.trials import ExperimentConfig
from sysid.linalg.spectral import eigenvalues
from sysid.models.experiment import ExperimentResult
from sysid.models.trajectory import Trajectory
from sysid.simulation.simulate import simulate, simulate_scaled
from sysid.utils.file import write_complex_csv
from sysid.utils.misc import JSONObject, content_hash

__all__ = ["CliCommand", "EXIT_IO", "EXIT_NUMERIC", "EXIT_OK", "EXIT_USAGE", "SUBCOMMANDS", "run_command"]

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3
SUBCOMMANDS = ("simulate", "estimate", "bounds", "experiment")


class Report(Protocol):
    def to_result(self) -> ExperimentResult: ...


RUNNERS: dict[str, Callable[[ExperimentConfig], Report]] = {
    "rate": run_rate_sweep,
    "inconsistency": run_inconsistency,
    "spectrum": run_spectrum_growth,
    "concentration": concentration_suite,
    "structure": run_structure_checks,
}


@dataclass(frozen=True)
class CliCommand:
    """
    One parsed invocation

    Attributes:
        subcommand (str): simulate, estimate, bounds or experiment
        kind (str, optional): Experiment kind, falls back to `[experiment].kind`
        config_path (Path, optional): TOML or JSON configuration
        output_dir (Path, optional): Replaces `[run].output_dir`, not part of the recorded configuration
        seed (int, optional): Overrides `[run].seed`
        delta (float, optional): Overrides `[run].delta`
        trials (int, optional): Overrides `[run].trials`
        trajectory (Path, optional): Trajectory file for `estimate`
        quiet (bool): No progress bars, warnings only
        verbosity (int): Number of -v flags
    """

    subcommand: str
    kind: Optional[str] = None
    config_path: Optional[Path] = None
    output_dir: Optional[Path] = None
    seed: Optional[int] = None
    delta: Optional[float] = None
    trials: Optional[int] = None
    trajectory: Optional[Path] = None
    quiet: bool = False
    verbosity: int = 0


def load_config(command: CliCommand) -> RunConfig:
    config = parse_config(command.config_path) if command.config_path else RunConfig(base_dir=Path.cwd())
    return config.with_overrides(
        seed=command.seed,
        delta=command.delta,
        trials=command.trials,
    )


def output_path(config: RunConfig, command: CliCommand) -> Path:
    return config.output_path() if command.output_dir is None else command.output_dir


def config_echo(config: RunConfig) -> JSONObject:
    """The configuration as recorded in artifacts, the worker count left out"""
    echo = dump_config(config)
    run = echo.get("run")
    if isinstance(run, dict):
        run.pop("threads", None)
    return echo


def _announce(name: str, config: RunConfig) -> JSONObject:
    echo = config_echo(config)
    logger.info("%s with seed %d, config hash %s", name, config.run.seed, content_hash(echo))
    return echo


def command_simulate(config: RunConfig, command: CliCommand) -> Path:
    """Simulate `[run].T` steps and write the trajectory, its noise and a sidecar"""
    echo = _announce("simulate", config)
    system = config.build_system()
    T, seed = config.run.T, config.run.seed
    try:
        trajectory = simulate(system, config.noise, T, seed, overflow_log_cap=config.constants.overflow_log_cap)
    except OverflowRiskError as error:
        logger.warning("%s, writing the scaled states z_t = A^{-t} X_t", error)
        trajectory = simulate_scaled(system, config.noise, T, seed)
    state_path, _, _ = trajectory.to_csv(
        output_path(config, command) / "trajectory.csv", metadata={"config_hash": content_hash(echo), "config": echo}
    )
    return state_path


def command_estimate(config: RunConfig, command: CliCommand) -> Path:
    """Fit a stored trajectory (or a freshly simulated one) and write `estimate.json`"""
    echo = _announce("estimate", config)
    system = config.build_system() if config.system is not None else None
    if command.trajectory is not None:
        trajectory = Trajectory.from_csv(command.trajectory)
    elif system is not None:
        T, seed = config.run.T, config.run.seed
        try:
            trajectory = simulate(system, config.noise, T, seed, overflow_log_cap=config.constants.overflow_log_cap)
        except OverflowRiskError:
            trajectory = simulate_scaled(system, config.noise, T, seed)
    else:
        raise ConfigError(["estimate needs --trajectory or a [system] table"])

    true_A = None if system is None else system.A
    report = ols_estimate(trajectory, true_A=true_A, true_B=None if system is None else system.B)
    payload: dict[str, Any] = {
        "T": trajectory.T,
        "scaled": trajectory.scaled,
        "A_hat": report.A_hat,
        "B_hat": report.B_hat,
        "error_opnorm": report.error_opnorm,
        "YT_spectrum": report.YT_spectrum,
        "lambda_min_YT": report.lambda_min_YT,
        "rank": report.rank,
        "rank_deficient": report.rank_deficient,
    }
    if trajectory.noises is not None and not trajectory.scaled:
        YT, ST = covariance_and_martingale(trajectory)
        payload["selfnorm"] = selfnorm_statistic(YT, ST, np.eye(YT.shape[0]))
    if true_A is not None and trajectory.inputs is None and float(np.abs(eigenvalues(true_A)).min()) > 1.0:
        diagnostics = explosive_pair(trajectory, true_A)
        payload["explosive"] = {
            "gap_opnorm": diagnostics.gap_opnorm,
            "lambda_min_UT": diagnostics.lambda_min_YT,
            "lambda_min_FT": diagnostics.lambda_min_FT,
            "selfnorm": diagnostics.selfnorm_value,
        }
    if report.error_opnorm is not None:
        logger.info("‖A - Â‖ = %.6g at T=%d", report.error_opnorm, trajectory.T)
    return write_json_artifact(output_path(config, command) / "estimate.json", payload, config.run.seed, echo)


def command_bounds(config: RunConfig, command: CliCommand) -> Path:
    """
    Evaluate the regime bound and its notation table at ([run].T, [run].delta), write `bounds.json`

    When the Jordan structure is known the complex form Λ is written next to it as `jordan.re.csv`
    and `jordan.im.csv`.
    """
    echo = _announce("bounds", config)
    system = config.build_system()
    report = regime_error_bound(system, config.run.delta, config.run.T, config.constants)
    bound = report.error_upper_bound
    logger.info(
        "regime %s, rate %s, bound %s", report.regime, report.rate_class, "n/a" if bound is None else f"{bound:.6g}"
    )
    for note in report.assumptions_violated:
        logger.warning("%s", note)
    structure = system.jordan_structure()
    if structure is not None:
        write_complex_csv(output_path(config, command) / "jordan.csv", structure[0].matrix())
    return write_json_artifact(output_path(config, command) / "bounds.json", report, config.run.seed, echo)


def command_experiment(config: RunConfig, command: CliCommand) -> Path:
    """Run one experiment and write `summary.json`, `raw.csv`, `plot.gp` and `plot.svg`"""
    kind = command.kind or config.experiment.kind
    if kind is None:
        raise ConfigError([f"experiment: name a kind, one of {sorted(EXPERIMENT_MAP)}"])
    echo = _announce(f"experiment {kind}", config)
    experiment = config.experiment_config(kind, progress=not command.quiet)
    result = RUNNERS[kind](experiment).to_result()
    directory = output_path(config, command)
    write_outputs(directory, result, config.run.seed, echo)
    return directory / "summary.json"


COMMANDS: dict[str, Callable[[RunConfig, CliCommand], Path]] = {
    "simulate": command_simulate,
    "estimate": command_estimate,
    "bounds": command_bounds,
    "experiment": command_experiment,
}


def run_command(command: CliCommand) -> int:
    """
    Dispatch a parsed command and map failures to exit codes

    0 on success, 1 for usage and configuration problems, 2 for numeric, regime, precondition and dimension failures,
    3 for I/O failures.
    """
    match command.subcommand:
        case name if name in COMMANDS:
            handler = COMMANDS[name]
        case _:
            logger.error("unknown subcommand `%s`, choose from %s", command.subcommand, ", ".join(SUBCOMMANDS))
            return EXIT_USAGE
    try:
        config = load_config(command)
        path = handler(config, command)
    except ConfigError as error:
        for problem in error.problems:
            logger.error("config: %s", problem)
        return EXIT_USAGE
    except (NumericError, RegimeError, PreconditionError, DimensionError) as error:
        logger.error("%s", error)
        return EXIT_NUMERIC
    except (ArtifactIOError, OSError) as error:
        logger.error("%s", error)
        return EXIT_IO
    logger.info("done: %s", path)
    return EXIT_OK

