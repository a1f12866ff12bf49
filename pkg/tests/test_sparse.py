import numpy as np
import pytest
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator

from spectra_count import ContractViolation, CsrMatrix, ShiftedOperator, as_operator, gen_laplace_2d, matvec
from testing_tools import diag_csr, random_symmetric, to_csr


def test_matvec_identity():
    A = diag_csr([1, 1, 1])
    assert np.allclose(matvec(A, np.array([1.0, 2.0, 3.0])), [1, 2, 3])


def test_matvec_diagonal():
    A = diag_csr([-4, 9])
    assert np.allclose(matvec(A, np.ones(2)), [-4, 9])


def test_matvec_laplace_stencil():
    A = gen_laplace_2d(2)
    e1 = np.zeros(9)
    e1[0] = 1.0
    assert np.array_equal(matvec(A, e1), [64, -16, 0, -16, 0, 0, 0, 0, 0])


def test_matvec_dimension_mismatch():
    with pytest.raises(ContractViolation):
        matvec(diag_csr([1, 2]), np.ones(3))


def test_matvec_linearity():
    rng = np.random.default_rng(3)
    A = to_csr(random_symmetric(40, rng))

    for _ in range(10):
        x, y = rng.standard_normal(40), rng.standard_normal(40)
        a, b = rng.standard_normal(2)
        left = matvec(A, a * x + b * y)
        right = a * matvec(A, x) + b * matvec(A, y)
        assert np.linalg.norm(left - right) <= 1e-12 * max(1.0, np.linalg.norm(left))


def test_csr_structure():
    A = CsrMatrix(3, [0, 1, 3, 4], [0, 1, 2, 1], [2.0, 3.0, -1.0, -1.0])

    assert A.n == 3
    assert A.nnz == 4
    assert A.shape == (3, 3)
    assert np.array_equal(A.row_ptr, [0, 1, 3, 4])
    assert np.array_equal(A.diagonal(), [2, 3, 0])
    assert A.max_abs() == 3.0
    assert "n=3" in repr(A)


def test_csr_is_immutable_copy():
    values = np.array([1.0, 2.0])
    A = CsrMatrix(2, [0, 1, 2], [0, 1], values)

    values[0] = 10.0
    assert A.values[0] == 1.0

    with pytest.raises(ValueError):
        A.values[0] = 5.0


def test_csr_rejects_bad_structure():
    with pytest.raises(ContractViolation):
        CsrMatrix(2, [0, 1], [0], [1.0])

    with pytest.raises(ContractViolation):
        CsrMatrix(2, [1, 1, 2], [0, 1], [1.0, 1.0])

    with pytest.raises(ContractViolation):
        CsrMatrix(2, [0, 2, 2], [1, 0], [1.0, 1.0], symmetric=False)

    with pytest.raises(ContractViolation):
        CsrMatrix(2, [0, 1, 2], [0, 2], [1.0, 1.0])


def test_csr_symmetry_check():
    with pytest.raises(ContractViolation):
        to_csr([[1.0, 2.0], [0.0, 1.0]])

    with pytest.raises(ContractViolation):
        to_csr([[1.0, 2.0], [2.5, 1.0]])

    A = to_csr([[1.0, 2.0], [0.0, 1.0]], symmetric=False)
    assert not A.is_symmetric()
    assert to_csr([[1.0, 2.0], [2.0, 1.0]]).is_symmetric()


def test_csr_from_scipy_sums_duplicates():
    coo = sp.coo_matrix(([1.0, 2.0, 3.0], ([0, 0, 1], [0, 0, 1])), shape=(2, 2))
    A = CsrMatrix.from_scipy(coo)
    assert np.array_equal(A.todense(), [[3, 0], [0, 3]])

    with pytest.raises(ContractViolation):
        CsrMatrix.from_scipy(np.ones((2, 3)), symmetric=False)


def test_shifted_operator():
    rng = np.random.default_rng(5)
    dense = random_symmetric(12, rng)
    shifted = ShiftedOperator(to_csr(dense), 1.5)
    v = rng.standard_normal(12)

    assert shifted.n == 12
    assert np.allclose(shifted.apply(v), dense @ v - 1.5 * v)
    assert np.allclose(shifted.to_scipy().toarray(), dense - 1.5 * np.eye(12))
    assert np.allclose(shifted.as_operator().matvec(v), dense @ v - 1.5 * v)


def test_as_operator():
    dense = np.diag([1.0, 2.0])
    v = np.array([1.0, 1.0])

    for obj in (dense, to_csr(dense), ShiftedOperator(to_csr(dense), 0.0), sp.csr_matrix(dense)):
        operator = as_operator(obj)
        assert isinstance(operator, LinearOperator)
        assert np.allclose(operator.matvec(v), [1, 2])

    operator = as_operator(dense)
    assert as_operator(operator) is operator
