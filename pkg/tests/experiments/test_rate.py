import math

import numpy as np
import pytest

from sysid.errors import PreconditionError
from sysid.experiments.trials import ExperimentConfig
from sysid.experiments.rate import run_rate_sweep
from sysid.linalg.jordan import JordanSpec
from sysid.models.system import NoiseModel, SystemSpec, TaggedBlock
from sysid.simulation.composite import build_composite, random_stable_system
from sysid.utils.types import RegimeClass

ACCEPTANCE_GRID = (250, 500, 1000, 2000, 4000)


def test_noiseless_sweep_has_no_error() -> None:
    config = ExperimentConfig(
        system=SystemSpec.from_matrix([[0.9]], x0=[1.0]), noise=NoiseModel.zero(), T_grid=(10, 20), trials=2
    )
    sweep = run_rate_sweep(config)
    assert max(sweep.summary.medians) < 1e-12
    assert sweep.metadata["noise_variance"] == 0.0


def test_stable_sweep_shrinks(stable_system: SystemSpec) -> None:
    sweep = run_rate_sweep(ExperimentConfig(system=stable_system, T_grid=(100, 1600), trials=10, seed=5))
    first, last = sweep.summary.medians
    assert last < first
    assert len(sweep.records) == 20
    assert sweep.fit is not None and sweep.fit.kind == "loglog"
    assert sweep.metadata["pipeline"] == {"100": "direct", "1600": "direct"}


def test_sweep_does_not_depend_on_threads(stable_system: SystemSpec) -> None:
    base = dict(system=stable_system, T_grid=(50, 100, 200), trials=6, seed=9)
    single = run_rate_sweep(ExperimentConfig(**base, threads=1))
    pooled = run_rate_sweep(ExperimentConfig(**base, threads=4))
    assert single.records == pooled.records
    assert single.summary == pooled.summary


def test_explosive_grid_is_capped() -> None:
    config = ExperimentConfig(system=SystemSpec.from_matrix([[1.5]]), T_grid=(10, 20, 2000), trials=3)
    sweep = run_rate_sweep(config)
    assert sweep.summary.T_values == [10, 20]
    assert sweep.metadata["dropped_T"] == [2000]
    assert sweep.metadata["T_cap"] == math.floor(650 / math.log(1.5))


def test_long_explosive_horizons_switch_to_scaled_states() -> None:
    config = ExperimentConfig(system=SystemSpec.from_matrix([[1.5]]), T_grid=(20, 1000), trials=2)
    sweep = run_rate_sweep(config)
    assert sweep.metadata["pipeline"] == {"20": "direct", "1000": "scaled"}
    assert "lambda_min_YT" in sweep.metadata


def test_grid_beyond_the_cap_is_refused() -> None:
    with pytest.raises(PreconditionError, match="explosive cap"):
        run_rate_sweep(ExperimentConfig(system=SystemSpec.from_matrix([[1.5]]), T_grid=(5000,), trials=1))


def test_scaled_horizons_refuse_inputs() -> None:
    system = SystemSpec.from_matrix([[1.5]], B=[[1.0]])
    with pytest.raises(PreconditionError, match="inputs"):
        run_rate_sweep(ExperimentConfig(system=system, T_grid=(1000,), trials=1))


@pytest.mark.slow
def test_stable_rate() -> None:
    system = random_stable_system(d=3, rho_max=0.9, seed=7)
    sweep = run_rate_sweep(ExperimentConfig(system=system, T_grid=ACCEPTANCE_GRID, trials=200, seed=1, threads=4))
    assert sweep.fit is not None
    assert -0.65 <= sweep.fit.slope <= -0.35
    assert sweep.fit.r_squared >= 0.95


@pytest.mark.slow
def test_marginal_rate() -> None:
    sweep = run_rate_sweep(
        ExperimentConfig(system=SystemSpec.from_matrix([[1.0]]), T_grid=ACCEPTANCE_GRID, trials=200, seed=2, threads=4)
    )
    assert sweep.fit is not None
    assert -1.2 <= sweep.fit.slope <= -0.8


@pytest.mark.slow
def test_explosive_rate() -> None:
    sweep = run_rate_sweep(
        ExperimentConfig(
            system=SystemSpec.from_matrix([[1.5]]), T_grid=(10, 20, 30, 40, 50, 60), trials=200, seed=3, threads=4
        )
    )
    assert sweep.fit is not None and sweep.fit.kind == "semilog"
    assert sweep.fit.slope == pytest.approx(-math.log(1.5), rel=0.2)


@pytest.mark.slow
def test_joint_rate_with_inputs() -> None:
    system = SystemSpec.from_matrix(np.array([[0.6, 0.2], [0.0, 0.4]]), B=[[1.0], [0.5]])
    sweep = run_rate_sweep(ExperimentConfig(system=system, T_grid=ACCEPTANCE_GRID, trials=100, seed=4, threads=4))
    assert sweep.metadata["joint_error"]
    assert sweep.fit is not None
    assert -0.65 <= sweep.fit.slope <= -0.35


@pytest.mark.slow
def test_composite_rate() -> None:
    system = build_composite(
        [
            TaggedBlock(JordanSpec.diagonal([0.5]), RegimeClass.STABLE),
            TaggedBlock(JordanSpec.diagonal([1.0]), RegimeClass.MARGINAL),
            TaggedBlock(JordanSpec.diagonal([1.02]), RegimeClass.EXPLOSIVE),
        ],
        similarity_seed=3,
        conditioning=2.0,
    )
    sweep = run_rate_sweep(ExperimentConfig(system=system, T_grid=(200, 400, 800, 1600), trials=50, seed=5, threads=4))
    assert sweep.fit is not None
    assert -1.2 <= sweep.fit.slope <= -0.3
