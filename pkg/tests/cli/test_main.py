import json
from pathlib import Path

import numpy as np
import pytest

from sysid.cli.commands import EXIT_IO, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE
from sysid.cli.main import main, parse_command
from sysid.models.trajectory import Trajectory
from sysid.utils.file import read_complex_csv
from tests.conftest import WriteConfig

STABLE = """
[system]
A = [[0.5, 0.2], [0.0, 0.7]]

[run]
T = 300
seed = 5
"""

SMALL_INCONSISTENCY = """
[run]
trials = 12
seed = 1

[experiment]
kind = "inconsistency"
options = { T = 150 }
"""


def test_unknown_subcommand_is_a_usage_error(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["fly"]) == EXIT_USAGE
    assert "sysid: error" in capsys.readouterr().err


def test_bad_flag_value_is_a_usage_error() -> None:
    assert main(["bounds", "--seed", "many"]) == EXIT_USAGE


def test_parse_command() -> None:
    command = parse_command(["experiment", "rate", "--seed", "3", "-vv", "--out", "results"])
    assert (command.subcommand, command.kind, command.seed, command.verbosity) == ("experiment", "rate", 3, 2)
    assert command.output_dir == Path("results")


def test_missing_config_file_is_an_io_error(tmp_path: Path) -> None:
    assert main(["bounds", "--config", str(tmp_path / "absent.toml")]) == EXIT_IO


def test_invalid_config_exits_with_usage_code(write_config: WriteConfig, tmp_path: Path) -> None:
    path = write_config("[run]\nT_grid = [500, 250]\n")
    assert main(["bounds", "--config", str(path), "--out", str(tmp_path / "out")]) == EXIT_USAGE


def test_bounds_of_an_irregular_explosive_system(write_config: WriteConfig, tmp_path: Path) -> None:
    path = write_config("[system]\nA = [[1.1, 0.0], [0.0, 1.1]]\n")
    assert main(["bounds", "--config", str(path), "--out", str(tmp_path / "out")]) == EXIT_NUMERIC


def test_bounds_writes_the_report(write_config: WriteConfig, tmp_path: Path) -> None:
    out = tmp_path / "out"
    assert main(["bounds", "--config", str(write_config(STABLE)), "--out", str(out), "--quiet"]) == EXIT_OK
    document = json.loads((out / "bounds.json").read_text(encoding="utf-8"))
    assert document["result"]["rate_class"] == "1/sqrt(T)"
    assert document["seed"] == 5
    assert not (out / "jordan.re.csv").exists()


def test_bounds_writes_the_jordan_form_of_a_diagonal_system(write_config: WriteConfig, tmp_path: Path) -> None:
    out = tmp_path / "out"
    path = write_config("[system]\nA = [[0.5, 0.0], [0.0, 0.25]]\n\n[run]\nT = 400\n")
    assert main(["bounds", "--config", str(path), "--out", str(out), "--quiet"]) == EXIT_OK
    np.testing.assert_allclose(read_complex_csv(out / "jordan.csv"), np.diag([0.5, 0.25]))


def test_simulate_then_estimate(write_config: WriteConfig, tmp_path: Path) -> None:
    config = write_config(STABLE)
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(config), "--out", str(out), "--quiet"]) == EXIT_OK
    trajectory = Trajectory.from_csv(out / "trajectory.csv")
    assert trajectory.T == 300 and trajectory.noises is not None

    args = ["estimate", "--config", str(config), "--out", str(out), "--trajectory", str(out / "trajectory.csv")]
    assert main([*args, "--quiet"]) == EXIT_OK
    estimate = json.loads((out / "estimate.json").read_text(encoding="utf-8"))["result"]
    assert estimate["T"] == 300
    assert estimate["error_opnorm"] < 0.5
    assert "selfnorm" in estimate


def test_long_explosive_simulation_is_scaled(write_config: WriteConfig, tmp_path: Path) -> None:
    config = write_config("[system]\nA = [[1.5]]\n\n[run]\nT = 2000\n")
    out = tmp_path / "out"
    assert main(["estimate", "--config", str(config), "--out", str(out), "--quiet"]) == EXIT_OK
    estimate = json.loads((out / "estimate.json").read_text(encoding="utf-8"))["result"]
    assert estimate["scaled"] is True
    assert "explosive" in estimate


def test_estimate_needs_data(tmp_path: Path) -> None:
    assert main(["estimate", "--out", str(tmp_path / "out")]) == EXIT_USAGE


def test_experiment_writes_summary_with_modes(write_config: WriteConfig, tmp_path: Path) -> None:
    out = tmp_path / "out"
    assert main(["experiment", "--config", str(write_config(SMALL_INCONSISTENCY)), "--out", str(out), "--quiet"]) == 0
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert "modes" in summary["results"]
    assert summary["kind"] == "inconsistency"
    assert {"raw.csv", "plot.gp", "plot.svg"} == set(summary["artifacts"])


def test_experiment_needs_a_kind(tmp_path: Path) -> None:
    assert main(["experiment", "--out", str(tmp_path / "out")]) == EXIT_USAGE


@pytest.mark.parametrize("kind", ["inconsistency", "spectrum"])
def test_summary_is_identical_across_threads(
    kind: str, write_config: WriteConfig, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    config = write_config("[run]\ntrials = 8\nT_grid = [40, 80]\nseed = 2\n\n[experiment]\noptions = { T = 100 }\n")
    summaries = []
    for threads in ("1", "2", "8"):
        monkeypatch.setenv("SYSID_THREADS", threads)
        out = tmp_path / f"threads-{threads}"
        assert main(["experiment", kind, "--config", str(config), "--out", str(out), "--quiet"]) == EXIT_OK
        summaries.append((out / "summary.json").read_bytes())
    assert summaries[0] == summaries[1] == summaries[2]
