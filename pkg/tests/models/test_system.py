import numpy as np
import pytest
from numpy.testing import assert_allclose

from sysid.errors import DimensionError
from sysid.linalg.jordan import JordanSpec
from sysid.models.system import SystemSpec


def test_jordan_construction_records_eigenvectors() -> None:
    spec = JordanSpec.from_pairs([(1.5, 2), (complex(0.6, 0.3), 1), (complex(0.6, -0.3), 1)])
    similarity = np.array([[2.0, 0.0, 0.0, 1.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.5, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]])
    system = SystemSpec.from_jordan(spec, similarity)
    structure = system.jordan_structure()
    assert structure is not None
    jordan, P = structure
    # A = P⁻¹ Λ P
    assert_allclose(np.linalg.solve(P, jordan.matrix() @ P), system.A, atol=1e-12)


def test_diagonal_matrices_have_a_known_structure() -> None:
    structure = SystemSpec.from_matrix(np.diag([0.5, 2.0])).jordan_structure()
    assert structure is not None
    assert_allclose(structure[0].eigenvalues(), [0.5, 2.0])
    assert SystemSpec.from_matrix([[1.0, 1.0], [0.0, 1.0]]).jordan_structure() is None


def test_inputs_must_match() -> None:
    with pytest.raises(DimensionError):
        SystemSpec.from_matrix(np.eye(2), B=np.ones((3, 1)))
    system = SystemSpec.from_matrix(np.eye(2)).with_inputs(np.ones((2, 1)))
    assert system.input_dim == 1 and system.has_inputs
