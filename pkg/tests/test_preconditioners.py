import numpy as np
import pytest

from spectra_count import ContractViolation, ShiftedOperator, count_laplace_eigs_below, gen_laplace_2d
from spectra_count.laplace import laplace_shift_at_fraction
from spectra_count.preconditioner import (
    PreconditionerSpec, UnfactoredPreconditioner, as_unfactored, identity_preconditioner,
)
from spectra_count.preconditioners import ildl_factorize, make_abs_diagonal, make_abs_ildl, make_preconditioner
from spectra_count.preconditioners.diagonal import boost_pivots
from testing_tools import diag_csr, negative_count, operator_to_dense, to_csr, with_spectrum


def t_to_dense(p):
    return np.column_stack([p.apply_t(e) for e in np.eye(p.dimension)])


def congruence_to_dense(p, A, tau):
    return operator_to_dense(p.congruence(ShiftedOperator(A, tau)), A.n)


def test_identity():
    p = identity_preconditioner(3)
    v = np.array([1.0, -2.0, 3.0])

    assert p.factored
    assert p.name == "none"
    assert np.array_equal(p.apply_t(v), v)
    assert np.array_equal(p.apply_m(v), v)
    assert p.apply_m(v) is not v


def test_abs_diagonal():
    p = make_abs_diagonal(diag_csr([2, 3]), 0.0)

    assert p.name == "absdiag"
    assert p.info == {"boosted_pivots": 0}
    assert np.allclose(t_to_dense(p), np.diag([1 / 2, 1 / 3]))
    assert np.allclose(p.apply_m(np.ones(2)), [2 ** -0.5, 3 ** -0.5])


def test_abs_diagonal_shift():
    A = diag_csr([-4, 9])
    p = make_abs_diagonal(A, 0.0)

    assert np.allclose(congruence_to_dense(p, A, 0.0), np.diag([-1, 1]))


def test_abs_diagonal_boost():
    p = make_abs_diagonal(diag_csr([1, 2, 3]), 2.0)

    assert p.info["boosted_pivots"] == 1
    assert np.all(np.isfinite(t_to_dense(p)))


def test_abs_diagonal_badly_scaled():
    rng = np.random.default_rng(0)
    n = 30
    base = with_spectrum(np.linspace(1.0, 4.0, n), rng)
    scaling = np.diag(10.0 ** np.linspace(-3, 3, n))
    dense = scaling @ base @ scaling
    A = to_csr((dense + dense.T) / 2)

    assert np.linalg.cond(A.todense()) > 1e6

    p = make_abs_diagonal(A, 0.0)
    assert p.info["boosted_pivots"] == 0

    C = congruence_to_dense(p, A, 0.0)
    assert np.linalg.cond(C) < 10 * np.linalg.cond(base)


def test_abs_diagonal_keeps_small_nonzero_entries():
    p = make_abs_diagonal(diag_csr([1e-12, -1e-9, 1e6]), 0.0)

    assert p.info["boosted_pivots"] == 0
    assert np.allclose(t_to_dense(p), np.diag([1e12, 1e9, 1e-6]))


def test_boost_pivots():
    values, count = boost_pivots([0.0, 1e-10, -1e-10, 2.0], boost_rtol=1e-8)

    assert count == 3
    assert np.allclose(values, [2e-8, 2e-8, -2e-8, 2.0], rtol=0, atol=1e-20)

    values, count = boost_pivots([0.0], boost_rtol=1e-8, reference=0.0)
    assert count == 1
    assert values[0] == 1e-8

    values, count = boost_pivots([1.0, -3.0])
    assert count == 0
    assert np.array_equal(values, [1.0, -3.0])


def test_ildl_diagonal():
    factors = ildl_factorize(diag_csr([-4, 9]), 0.0, 0.0)

    assert np.array_equal(np.sort(factors.d), [-4, 9])
    assert factors.negative_pivots == 1
    assert factors.boosted == 0
    assert factors.lower.nnz == 2


def test_ildl_complete_reconstructs_laplacian():
    A = gen_laplace_2d(4)
    factors = ildl_factorize(A, 0.0, 0.0)

    difference = factors.reconstruct() - A.to_scipy()
    assert np.max(np.abs(difference.toarray())) <= 1e-10 * A.max_abs()
    assert factors.negative_pivots == 0
    assert sorted(factors.perm) == list(range(A.n))


def test_ildl_counts_negative_pivots():
    rng = np.random.default_rng(1)
    values = np.linspace(-5.0, 5.0, 50) + 0.1
    dense = with_spectrum(values, rng)
    A = to_csr((dense + dense.T) / 2)

    for tau in (-2.05, 0.0, 3.3):
        factors = ildl_factorize(A, tau, 0.0)
        assert factors.boosted == 0
        assert factors.negative_pivots == negative_count(A.todense() - tau * np.eye(50))


def test_ildl_drop_tolerance_reduces_fill():
    A = gen_laplace_2d(4)
    tau = laplace_shift_at_fraction(4, 0.3)

    complete = ildl_factorize(A, tau, 0.0)
    incomplete = ildl_factorize(A, tau, 1e-2)

    assert incomplete.lower.nnz < complete.lower.nnz
    assert incomplete.drop_tol == 1e-2
    assert incomplete.shift == tau


def test_abs_ildl_ideal_diagonal():
    A = diag_csr([-4, 9])
    p = make_abs_ildl(ildl_factorize(A, 0.0, 0.0))

    C = congruence_to_dense(p, A, 0.0)
    assert np.allclose(np.sort(np.diag(C)), [-1, 1])
    assert np.allclose(C - np.diag(np.diag(C)), 0)


def test_abs_ildl_ideal_laplacian():
    A = gen_laplace_2d(4)
    tau = laplace_shift_at_fraction(4, 0.4)
    p = make_preconditioner(A, tau, "ldl-exact")

    C = congruence_to_dense(p, A, tau)
    values = np.linalg.eigvalsh((C + C.T) / 2)

    assert p.name == "ldl-exact"
    assert np.allclose(np.abs(values), 1, atol=1e-6)
    assert np.count_nonzero(values < 0) == count_laplace_eigs_below(4, tau)
    assert p.info["negative_pivots"] == count_laplace_eigs_below(4, tau)


def test_abs_ildl_keeps_inertia():
    A = gen_laplace_2d(4)
    tau = laplace_shift_at_fraction(4, 0.25)
    p = make_preconditioner(A, tau, PreconditionerSpec.new("ildl", 1e-5))

    C = congruence_to_dense(p, A, tau)

    assert p.name == "ildl"
    assert p.info["drop_tol"] == 1e-5
    assert negative_count((C + C.T) / 2) == count_laplace_eigs_below(4, tau)


def test_ildl_boosts_zero_pivot():
    A = to_csr([[0.0, 1.0], [1.0, 0.0]])
    p = make_preconditioner(A, 0.0, "ldl-exact")

    assert p.info["boosted_pivots"] == 1
    assert p.info["negative_pivots"] == 1
    assert "factorize_time" in p.info


def test_adjoint_consistency():
    rng = np.random.default_rng(2)
    A = gen_laplace_2d(3)
    tau = laplace_shift_at_fraction(3, 0.5)

    absdiag = make_preconditioner(A, tau, "absdiag")
    ildl = make_preconditioner(A, tau, PreconditionerSpec.new("ildl", 1e-3))

    for p in (absdiag, ildl):
        for _ in range(5):
            x, y = rng.standard_normal(A.n), rng.standard_normal(A.n)
            left = p.apply_m(x) @ y
            right = x @ p.apply_m_adjoint(y)
            assert left == pytest.approx(right, rel=1e-10, abs=1e-12)


def test_t_is_hermitian_positive_definite():
    rng = np.random.default_rng(3)
    A = gen_laplace_2d(3)
    tau = laplace_shift_at_fraction(3, 0.6)

    for kind in ("none", "absdiag", "ldl-exact"):
        T = t_to_dense(make_preconditioner(A, tau, kind))
        assert np.allclose(T, T.T, atol=1e-9 * np.abs(T).max())

        for _ in range(5):
            x = rng.standard_normal(A.n)
            assert x @ T @ x > 0


def test_spec_validation():
    assert PreconditionerSpec.new() == ("none", None)
    assert PreconditionerSpec.new("absdiag", 0.1).drop_tol is None
    assert PreconditionerSpec.new("ildl", 0).to_dict() == {"kind": "ildl", "drop_tol": 0.0}

    with pytest.raises(ContractViolation):
        PreconditionerSpec.new("ilu")

    with pytest.raises(ContractViolation):
        PreconditionerSpec.new("ildl")

    with pytest.raises(ContractViolation):
        PreconditionerSpec.new("ildl", -1.0)


def test_factorization_validation():
    with pytest.raises(ContractViolation):
        ildl_factorize(diag_csr([1, 2]), 0.0, -0.5)

    with pytest.raises(ContractViolation):
        ildl_factorize(to_csr([[1.0, 2.0], [0.0, 1.0]], symmetric=False), 0.0, 0.0)


def test_dimension_mismatch():
    p = identity_preconditioner(3)

    with pytest.raises(ContractViolation):
        p.left_product(diag_csr([1, 2]))

    with pytest.raises(ContractViolation):
        p.congruence(diag_csr([1, 2]))


def test_as_unfactored():
    A = diag_csr([2, 8])
    p = make_abs_diagonal(A, 0.0)
    unfactored = as_unfactored(p)

    assert isinstance(unfactored, UnfactoredPreconditioner)
    assert not unfactored.factored
    assert unfactored.name == "absdiag"
    assert np.allclose(unfactored.apply_t(np.ones(2)), [1 / 2, 1 / 8])
    assert as_unfactored(unfactored) is unfactored

    product = operator_to_dense(unfactored.left_product(A), 2)
    assert np.allclose(product, np.eye(2))
