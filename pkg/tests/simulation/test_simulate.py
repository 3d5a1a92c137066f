import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from scipy import linalg

from sysid.errors import DimensionError, OverflowRiskError, PreconditionError, SingularMatrixError
from sysid.models.system import NoiseModel, SystemSpec
from sysid.simulation.rng import cell_stream
from sysid.simulation.simulate import augment_control, predicted_log_magnitude, simulate, simulate_scaled, unscale


def test_unit_root_with_unit_noise_counts_steps() -> None:
    trajectory = simulate(SystemSpec.from_matrix([[1.0]]), NoiseModel(), 5, seed=0, noises=np.ones((5, 1)))
    assert_array_equal(trajectory.states.ravel(), np.arange(6.0))


def test_same_seed_same_trajectory(stable_system: SystemSpec, gaussian: NoiseModel) -> None:
    first = simulate(stable_system, gaussian, 200, seed=3)
    second = simulate(stable_system, gaussian, 200, seed=3)
    other = simulate(stable_system, gaussian, 200, seed=4)
    assert_array_equal(first.states, second.states)
    assert not np.array_equal(first.states, other.states)


def test_zero_noise_follows_powers_of_A() -> None:
    A = np.array([[0.5, 0.2], [0.0, 0.8]])
    x0 = np.array([1.0, -1.0])
    trajectory = simulate(SystemSpec.from_matrix(A, x0=x0), NoiseModel.zero(), 6, seed=0)
    assert_allclose(trajectory.states[6], np.linalg.matrix_power(A, 6) @ x0)
    assert_array_equal(trajectory.noises, np.zeros((6, 2)))


def test_overflow_risk_names_scaled_simulation() -> None:
    with pytest.raises(OverflowRiskError, match="simulate_scaled"):
        simulate(SystemSpec.from_matrix([[1.5]]), NoiseModel(), 2000, seed=0)


def test_predicted_magnitude() -> None:
    assert predicted_log_magnitude(np.array([[0.9]]), 100) == 0.0
    assert math.isclose(predicted_log_magnitude(np.diag([2.0, 0.5]), 10), 10 * math.log(2.0))


def test_scaled_states_match_direct_states(gaussian: NoiseModel) -> None:
    system = SystemSpec.from_matrix([[1.2, 1.0], [0.0, 1.3]])
    direct = simulate(system, gaussian, 60, seed=11)
    scaled = simulate_scaled(system, gaussian, 60, seed=11)
    assert scaled.scaled
    assert_array_equal(direct.noises, scaled.noises)
    A_inv = linalg.inv(system.A)
    for t in (1, 17, 60):
        assert_allclose(scaled.states[t], np.linalg.matrix_power(A_inv, t) @ direct.states[t], rtol=1e-7, atol=1e-9)
    assert_allclose(unscale(scaled, system.A).states, direct.states, rtol=1e-6, atol=1e-6)


def test_scaled_simulation_needs_invertible_A() -> None:
    with pytest.raises(SingularMatrixError):
        simulate_scaled(SystemSpec.from_matrix([[0.0, 1.0], [0.0, 0.0]]), NoiseModel(), 5, seed=0)


def test_scaled_simulation_reaches_long_explosive_horizons() -> None:
    trajectory = simulate_scaled(SystemSpec.from_matrix([[1.5]]), NoiseModel(), 3000, seed=0)
    assert np.all(np.isfinite(trajectory.states))


def test_inputs_leave_the_noise_unchanged(gaussian: NoiseModel) -> None:
    A = 0.5 * np.eye(2)
    plain = simulate(SystemSpec.from_matrix(A), gaussian, 50, seed=5)
    driven = simulate(SystemSpec.from_matrix(A, B=[[1.0], [0.5]]), gaussian, 50, seed=5)
    assert driven.inputs is not None and driven.inputs.shape == (50, 1)
    assert_array_equal(plain.noises, driven.noises)
    assert not np.array_equal(plain.states, driven.states)


def test_replayed_noise_shape_is_checked() -> None:
    with pytest.raises(DimensionError):
        simulate(SystemSpec.from_matrix(np.eye(2)), NoiseModel(), 4, seed=0, noises=np.ones((3, 2)))


def test_horizon_must_be_positive() -> None:
    with pytest.raises(PreconditionError):
        simulate(SystemSpec.from_matrix([[0.5]]), NoiseModel(), 0, seed=0)


def test_augmented_control_spectrum(rng: np.random.Generator) -> None:
    A, B = rng.standard_normal((3, 3)), rng.standard_normal((3, 2))
    augmented = augment_control(A, B)
    expected = np.concatenate([linalg.eigvals(A), np.zeros(2)])
    assert_allclose(np.poly(augmented), np.poly(expected).real, atol=1e-7)


def test_gaussian_noise_is_isotropic() -> None:
    trajectory = simulate(SystemSpec.from_matrix(np.zeros((2, 2))), NoiseModel(), 20_000, seed=2)
    noises = trajectory.require_noises()
    covariance = noises.T @ noises / noises.shape[0]
    assert np.linalg.norm(covariance - np.eye(2), 2) < 0.1


def test_scaled_state_variance_converges(gaussian: NoiseModel) -> None:
    a, T, trials = 1.5, 60, 4000
    system = SystemSpec.from_matrix([[a]])
    finals = np.array([
        simulate_scaled(system, gaussian, T, seed=0, rng=cell_stream(3, T, trial)).states[-1, 0]
        for trial in range(trials)
    ])
    # Var z_T = Σ_{t<=T} a^{-2t} -> a^{-2} / (1 - a^{-2})
    expected = a**-2 / (1 - a**-2)
    assert finals.var() == pytest.approx(expected, rel=0.1)
    assert abs(finals.mean()) < 5 * math.sqrt(expected / trials)
