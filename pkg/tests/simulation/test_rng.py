import numpy as np
from numpy.testing import assert_array_equal

from sysid.simulation.rng import cell_stream, stream


def test_cell_streams_do_not_depend_on_draw_order() -> None:
    first = [cell_stream(0, T, trial).standard_normal(4) for T in (10, 20) for trial in range(3)]
    second = [cell_stream(0, T, trial).standard_normal(4) for T in (20, 10) for trial in reversed(range(3))]
    assert_array_equal(first[0], second[-1])
    assert_array_equal(first[3], second[2])


def test_keys_separate_streams() -> None:
    assert stream(0, 1).standard_normal() != stream(0, 2).standard_normal()
    assert stream(0).standard_normal() != stream(1).standard_normal()


def test_cell_is_keyed_by_horizon_value() -> None:
    assert_array_equal(cell_stream(5, 500, 1).standard_normal(3), stream(5, 500, 1).standard_normal(3))


def test_neighbouring_cells_are_uncorrelated() -> None:
    for T, trial in [(100, 0), (100, 7), (2000, 3)]:
        base = cell_stream(11, T, trial).standard_normal(2000)
        for other in (cell_stream(11, T, trial + 1), cell_stream(11, T + 1, trial), cell_stream(12, T, trial)):
            assert abs(np.corrcoef(base, other.standard_normal(2000))[0, 1]) < 0.1
