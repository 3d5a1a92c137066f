import numpy as np
import pytest

from sysid.experiments.inconsistency import inconsistency_experiment, run_inconsistency
from sysid.experiments.trials import ExperimentConfig


def test_regular_system_is_identified_while_irregular_is_not() -> None:
    report = inconsistency_experiment(T=300, trials=40, seed=1)
    assert report.beta_irregular.shape == (40,)
    assert report.regular_accuracy >= 0.9
    assert report.std_irregular > 10 * report.std_regular
    assert report.lambda_min_irregular.shape == (40,)


def test_result_carries_modes_and_records() -> None:
    config = ExperimentConfig(trials=20, seed=2, options={"T": 200})
    result = run_inconsistency(config).to_result()
    assert result.kind == "inconsistency"
    assert "modes" in result.summary
    assert len(result.records) == 20
    assert result.series and sum(result.series[0].y) == 20


def test_same_seed_same_samples() -> None:
    first = inconsistency_experiment(T=100, trials=8, seed=3)
    second = inconsistency_experiment(T=100, trials=8, seed=3, threads=3)
    np.testing.assert_array_equal(first.beta_irregular, second.beta_irregular)


@pytest.mark.slow
def test_bimodal_off_diagonal_estimates() -> None:
    report = inconsistency_experiment(T=1000, trials=2000, seed=0, threads=4)
    assert report.std_irregular > 0.1
    assert report.regular_accuracy >= 0.95
    assert min(report.modes) < 0 < max(report.modes)
