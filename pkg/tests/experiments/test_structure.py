import math

import pytest

from sysid.errors import PreconditionError
from sysid.experiments.structure import (
    describe_jordan,
    gap_decay_check,
    gramian_growth_check,
    run_structure_checks,
    structure_checks,
    surrogate_floor_check,
)
from sysid.experiments.trials import ExperimentConfig
from sysid.linalg.jordan import JordanSpec


def test_description() -> None:
    assert describe_jordan(JordanSpec.from_pairs([(1.5, 2), (0.5, 1)])) == "J2(1.5)+J1(0.5)"


def test_gramian_of_unit_modulus_systems_grows_linearly() -> None:
    jordan = gramian_growth_check(JordanSpec.from_pairs([(1.0, 2)]))
    assert jordan.ok and jordan.exact is None
    diagonal = gramian_growth_check(JordanSpec.diagonal([1.0, 1.0]), t_grid=(16, 64, 256))
    assert diagonal.exact and diagonal.spread == pytest.approx((17 / 16) / (257 / 256))


def test_gramian_check_needs_unit_modulus() -> None:
    with pytest.raises(PreconditionError):
        gramian_growth_check(JordanSpec.diagonal([0.5]))


def test_gap_decays_at_the_eigenvalue_rate() -> None:
    check = gap_decay_check(JordanSpec.diagonal([1.5]), T_grid=(20, 40, 60, 80), trials=20, seed=1)
    assert check.fit is not None
    assert check.fit.slope <= -0.9 * math.log(1.5)
    assert check.ok


def test_gap_check_needs_explosive_structure() -> None:
    with pytest.raises(PreconditionError):
        gap_decay_check(JordanSpec.diagonal([1.0]), trials=1)


def test_surrogate_floor_separates_regular_from_irregular() -> None:
    regular = surrogate_floor_check(JordanSpec.from_pairs([(1.5, 2)]), T=40, trials=5)
    irregular = surrogate_floor_check(JordanSpec.diagonal([1.5, 1.5]), T=40, trials=5)
    assert regular.regular and regular.min_floor > 0 and regular.ok
    assert not irregular.regular and irregular.max_floor <= 1e-8 and irregular.ok


def test_structure_checks_sort_structures() -> None:
    report = structure_checks(
        [JordanSpec.from_pairs([(1.0, 2)]), JordanSpec.diagonal([1.5]), JordanSpec.diagonal([0.5])],
        T_grid=(20, 30, 40),
        t_grid=(16, 32, 64),
        trials=3,
    )
    assert len(report.gramian) == 1 and len(report.gaps) == 1
    assert len(report.floors) == 2
    assert report.skipped == ("J1(0.5)",)
    assert len(report.records) == 6
    assert report.summary()["ok"] == report.ok


def test_structures_from_options() -> None:
    config = ExperimentConfig(T_grid=(20, 30), trials=2, options={"jordan": [[[[1.0, 0.0], 1]]], "t_grid": [16, 32]})
    report = run_structure_checks(config)
    assert [check.label for check in report.gramian] == ["J1(1)"]


@pytest.mark.slow
def test_structural_properties() -> None:
    report = structure_checks(
        [JordanSpec.from_pairs([(1.0, 2)]), JordanSpec.diagonal([1.5]), JordanSpec.from_pairs([(1.5, 2)])],
        t_grid=tuple(2**k for k in range(4, 11)),
        trials=50,
        threads=4,
    )
    assert report.ok
