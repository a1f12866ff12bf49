import re
from collections import namedtuple

import numpy as np
import scipy.linalg

from .exceptions import ContractViolation, EigenSolverError, OracleRefusal, QuadratureBreakdown
from .logger import logger
from .settings import get_setting


TridiagonalData = namedtuple("TridiagonalData", ("diag", "offdiag"))


class TridiagonalSym(TridiagonalData):
    """Symmetric tridiagonal matrix given by its diagonal and off-diagonal."""

    __slots__ = ()

    @classmethod
    def new(cls, diag, offdiag=()):
        """
        Create tridiagonal matrix checking that ``offdiag`` is one entry
        shorter than ``diag``.

        :rtype: spectra_count.dense.TridiagonalSym
        """

        diag = np.asarray(diag, dtype=float).ravel()
        offdiag = np.asarray(offdiag, dtype=float).ravel()

        if len(diag) < 1:
            raise ContractViolation("Tridiagonal matrix must have at least one row")
        if len(offdiag) != len(diag) - 1:
            raise ContractViolation(
                f"Off-diagonal must have {len(diag) - 1} entries, got {len(offdiag)}"
            )

        return cls(diag, offdiag)

    @property
    def size(self):
        return len(self.diag)

    def todense(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


EigenPairsSym = namedtuple("EigenPairsSym", ("values", "vectors"))

EigenPairsGeneral = namedtuple("EigenPairsGeneral", (
    "values", "vectors", "inverse_first_row", "inverse_first_column",
))


def _failing_index(exc):
    found = re.search(r"(\d+)", str(exc))
    return int(found.group(1)) if found else None


def tridiag_eig(t):
    """
    Full eigendecomposition of symmetric tridiagonal matrix (LAPACK ``stev``,
    implicit QL/QR with accumulated eigenvectors).

    :param t: :class:`TridiagonalSym`
    :returns: :class:`EigenPairsSym` with ascending values
    """

    if not (np.all(np.isfinite(t.diag)) and np.all(np.isfinite(t.offdiag))):
        raise ContractViolation("Tridiagonal matrix has non-finite entries")

    if t.size == 1:
        return EigenPairsSym(np.array(t.diag, dtype=float), np.ones((1, 1)))

    try:
        values, vectors = scipy.linalg.eigh_tridiagonal(t.diag, t.offdiag, lapack_driver="stev")
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"Tridiagonal eigensolver did not converge: {exc}", _failing_index(exc))

    return EigenPairsSym(values, vectors)


def hessenberg_eig(h, defective_cond=None):
    """
    Eigendecomposition of real upper Hessenberg matrix. Complex conjugate
    pairs are kept next to each other. The first row and the first column
    of ``Z^-1`` are obtained from LU solves instead of forming the inverse.

    :param h: square upper Hessenberg matrix
    :param defective_cond: condition number of ``Z`` treated as defective
    :returns: :class:`EigenPairsGeneral`
    """

    h = np.asarray(h, dtype=float)

    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
        raise ContractViolation(f"Expected non-empty square matrix, got shape {h.shape}")
    if np.any(np.tril(h, -2)):
        raise ContractViolation("Matrix is not upper Hessenberg")
    if not np.all(np.isfinite(h)):
        raise ContractViolation("Hessenberg matrix has non-finite entries")

    if defective_cond is None:
        defective_cond = get_setting("defective_cond")

    try:
        values, vectors = scipy.linalg.eig(h)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"Hessenberg eigensolver did not converge: {exc}", _failing_index(exc))

    order = np.lexsort((values.imag, values.real))
    values = values[order]
    vectors = vectors[:, order].astype(complex)

    condition = np.linalg.cond(vectors)
    if not np.isfinite(condition) or condition > defective_cond:
        raise QuadratureBreakdown(
            f"Eigenvector matrix is numerically singular (cond={condition:.3e}), "
            "try another sample vector or number of steps",
            condition=condition,
        )

    lu_and_piv = scipy.linalg.lu_factor(vectors)
    unit = np.zeros(len(values), dtype=complex)
    unit[0] = 1.0

    first_column = scipy.linalg.lu_solve(lu_and_piv, unit)
    first_row = scipy.linalg.lu_solve(lu_and_piv, unit, trans=1)

    return EigenPairsGeneral(values, vectors, first_row, first_column)


def sturm_count_below(t, tau):
    """
    Number of eigenvalues of ``t`` strictly below ``tau``, counted as the
    negative pivots of the ``LDL^T`` recurrence of ``t - tau * I``.
    Tiny pivots are clamped to keep the recurrence finite; an exactly zero
    pivot means ``tau`` is an eigenvalue of a leading block and is logged.
    """

    diag = np.asarray(t.diag, dtype=float) - tau
    offdiag_sq = np.asarray(t.offdiag, dtype=float) ** 2

    scale = max(np.max(np.abs(diag)), np.sqrt(np.max(offdiag_sq)) if len(offdiag_sq) else 0.0)
    pivmin = np.finfo(float).eps * max(scale, np.finfo(float).tiny)

    count = 0
    pivot = diag[0]

    for i in range(len(diag)):
        if i:
            pivot = diag[i] - offdiag_sq[i - 1] / pivot

        if pivot == 0.0:
            logger.warning("Shift %r coincides with an eigenvalue of a leading block (row %d)", tau, i)
            pivot = pivmin
        elif abs(pivot) < pivmin:
            pivot = pivmin if pivot > 0 else -pivmin

        if pivot < 0:
            count += 1

    return count


def _as_dense(A):
    if hasattr(A, "todense") and hasattr(A, "n"):
        return A.todense()
    dense = np.array(A, dtype=float)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise ContractViolation(f"Expected square matrix, got shape {dense.shape}")
    return dense


def dense_inertia_oracle(A, tau, cap=None):
    """
    Exact number of eigenvalues of ``A`` below ``tau``: densify ``A - tau*I``,
    reduce it to tridiagonal form with Householder reflections and count
    negative Sturm pivots.

    :param A: :class:`spectra_count.sparse.CsrMatrix` or dense symmetric array
    :param tau: shift
    :param cap: largest accepted dimension (``oracle_cap`` setting by default)
    """

    if cap is None:
        cap = get_setting("oracle_cap")

    n = A.n if hasattr(A, "n") else np.shape(A)[0]
    if n > cap:
        raise OracleRefusal(
            f"Dense oracle refuses n={n} (cap {cap}); use the analytic Laplacian "
            "oracle for generated matrices",
            n=n, cap=cap,
        )

    shifted = _as_dense(A) - tau * np.eye(n)
    if n == 1:
        return int(shifted[0, 0] < 0)

    reduced = scipy.linalg.hessenberg(shifted)
    tridiagonal = TridiagonalSym.new(np.diag(reduced), np.diag(reduced, -1))

    return sturm_count_below(tridiagonal, 0.0)
