import numpy as np
import pytest
from numpy.testing import assert_allclose

from sysid.errors import DimensionError, PreconditionError
from sysid.estimation.ols import covariance_and_martingale, estimation_error, ols_estimate
from sysid.models.system import NoiseModel, SystemSpec
from sysid.simulation.simulate import simulate, simulate_scaled, unscale


def test_noiseless_rich_trajectory_is_recovered_exactly() -> None:
    A = np.array([[0.9, 0.2], [-0.1, 0.8]])
    trajectory = simulate(SystemSpec.from_matrix(A, x0=[1.0, 1.0]), NoiseModel.zero(), 10, seed=0)
    report = ols_estimate(trajectory, true_A=A)
    assert_allclose(report.A_hat, A, atol=1e-10)
    assert report.error_opnorm is not None and report.error_opnorm < 1e-10
    assert report.rank == 2 and not report.rank_deficient


def test_stable_error_is_small_for_long_horizons(stable_system: SystemSpec, gaussian: NoiseModel) -> None:
    trajectory = simulate(stable_system, gaussian, 5000, seed=1)
    report = ols_estimate(trajectory, true_A=stable_system.A)
    assert report.error_opnorm is not None and report.error_opnorm < 0.15
    assert report.YT_spectrum.shape == (3,)
    assert report.lambda_min_YT == pytest.approx(report.YT_spectrum.min())


def test_inputs_are_estimated_jointly(gaussian: NoiseModel) -> None:
    A, B = 0.5 * np.eye(2), np.array([[1.0], [-0.5]])
    trajectory = simulate(SystemSpec.from_matrix(A, B=B), gaussian, 5000, seed=2)
    report = ols_estimate(trajectory, true_A=A, true_B=B)
    assert report.B_hat is not None and report.B_hat.shape == (2, 1)
    assert_allclose(report.B_hat, B, atol=0.1)
    assert report.YT_spectrum.shape == (3,)
    assert report.error_opnorm is not None and report.error_opnorm < 0.15
    assert report.joint_estimate.shape == (2, 3)


def test_silent_trajectory_is_rank_deficient() -> None:
    trajectory = simulate(SystemSpec.from_matrix(0.5 * np.eye(2)), NoiseModel.zero(), 20, seed=0)
    report = ols_estimate(trajectory, true_A=0.5 * np.eye(2))
    assert report.rank == 0 and report.rank_deficient
    assert not report.A_hat.any()
    assert report.error_opnorm == pytest.approx(0.5)


def test_scaled_fit_agrees_with_direct_fit(gaussian: NoiseModel) -> None:
    A = np.diag([1.1, 1.2])
    system = SystemSpec.from_matrix(A)
    direct = ols_estimate(simulate(system, gaussian, 30, seed=3), true_A=A)
    scaled = ols_estimate(simulate_scaled(system, gaussian, 30, seed=3), true_A=A)
    assert_allclose(scaled.A_hat, direct.A_hat, atol=1e-8)
    assert scaled.error_opnorm == pytest.approx(direct.error_opnorm, rel=1e-5)


def test_scaled_fit_needs_the_truth(gaussian: NoiseModel) -> None:
    trajectory = simulate_scaled(SystemSpec.from_matrix([[1.5]]), gaussian, 10, seed=0)
    with pytest.raises(PreconditionError):
        ols_estimate(trajectory)


def test_covariance_and_martingale(gaussian: NoiseModel) -> None:
    trajectory = simulate(SystemSpec.from_matrix([[0.5]]), gaussian, 50, seed=4)
    YT, ST = covariance_and_martingale(trajectory)
    x = trajectory.states[:-1, 0]
    assert YT[0, 0] == pytest.approx(float(x @ x))
    assert ST[0, 0] == pytest.approx(float(x @ trajectory.noises[:, 0]))


def test_covariance_refuses_scaled_states(gaussian: NoiseModel) -> None:
    with pytest.raises(PreconditionError):
        covariance_and_martingale(simulate_scaled(SystemSpec.from_matrix([[1.5]]), gaussian, 10, seed=0))


def test_estimation_error_shapes() -> None:
    assert estimation_error(np.diag([1.3, 0.9]), np.eye(2)) == pytest.approx(0.3)
    with pytest.raises(DimensionError):
        estimation_error(np.eye(2), np.eye(3))


def _random_system(rng: np.random.Generator, d: int, p: int) -> SystemSpec:
    A = rng.standard_normal((d, d))
    A *= 0.9 / max(float(np.abs(np.linalg.eigvals(A)).max()), 1e-3)
    B = rng.standard_normal((d, p)) if p else None
    return SystemSpec.from_matrix(A, B=B, x0=rng.standard_normal(d))


@pytest.mark.parametrize("p", [0, 2])
def test_estimate_matches_normal_equations(rng: np.random.Generator, gaussian: NoiseModel, p: int) -> None:
    for instance in range(100):
        d = 1 + instance % 4
        system = _random_system(rng, d, p)
        trajectory = simulate(system, gaussian, 40, seed=instance)
        Z = trajectory.regressors()
        theta = np.linalg.solve(Z.T @ Z, Z.T @ trajectory.following).T
        report = ols_estimate(trajectory)
        assert_allclose(report.joint_estimate, theta, atol=1e-10)


@pytest.mark.parametrize("p", [0, 1])
def test_error_is_the_normalized_martingale(gaussian: NoiseModel, p: int) -> None:
    A = np.array([[0.7, 0.4], [-0.2, 0.9]])
    B = np.array([[1.0], [0.5]]) if p else None
    system = SystemSpec.from_matrix(A, B=B)
    trajectory = simulate(system, gaussian, 200, seed=5)
    YT, ST = covariance_and_martingale(trajectory)
    truth = A if B is None else np.hstack([A, B])
    report = ols_estimate(trajectory)
    assert_allclose(report.joint_estimate - truth, np.linalg.solve(YT, ST).T, atol=1e-10)


def test_scaled_error_is_the_normalized_martingale(gaussian: NoiseModel) -> None:
    A = np.array([[1.2, 0.3], [0.0, 1.1]])
    system = SystemSpec.from_matrix(A)
    scaled = simulate_scaled(system, gaussian, 25, seed=6)
    YT, ST = covariance_and_martingale(unscale(scaled, A))
    report = ols_estimate(scaled, true_A=A)
    assert_allclose(report.A_hat - A, np.linalg.solve(YT, ST).T, rtol=1e-6, atol=1e-9)
    assert report.error_opnorm == pytest.approx(float(np.linalg.norm(np.linalg.solve(YT, ST), 2)), rel=1e-6)
