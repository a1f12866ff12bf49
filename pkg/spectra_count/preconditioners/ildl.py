"""
Incomplete ``LDL^T`` factorization of ``A - tau I`` with drop tolerance and
the preconditioner ``T = P^T L^-T |D|^-1 L^-1 P`` built from it.
"""

import time

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import reverse_cuthill_mckee
from scipy.sparse.linalg import spsolve_triangular

from ..exceptions import ContractViolation
from ..logger import logger
from ..preconditioner import FactoredPreconditioner
from ..sparse import ShiftedOperator
from .diagonal import boost_pivots


class IldlFactors:
    """
    Factors of ``P (A - tau I) P^T ~ L D L^T`` where ``(P v) = v[perm]``.

    :ivar ~.lower: unit lower triangular ``L`` in csr format
    :ivar ~.d: diagonal of ``D`` (1x1 pivots only)
    :ivar ~.perm: reverse Cuthill-McKee ordering
    :ivar ~.drop_tol: drop tolerance ``t``
    :ivar ~.boosted: number of boosted pivots
    :ivar ~.shift: ``tau``
    """

    __slots__ = ("lower", "d", "perm", "drop_tol", "boosted", "shift")

    def __init__(self, lower, d, perm, drop_tol, boosted, shift):
        self.lower = lower
        self.d = d
        self.perm = perm
        self.drop_tol = drop_tol
        self.boosted = boosted
        self.shift = shift

    @property
    def n(self):
        return len(self.d)

    @property
    def negative_pivots(self):
        return int(np.count_nonzero(self.d < 0))

    def reconstruct(self):
        """``P^T L D L^T P`` in the original ordering, as csr matrix."""
        product = (self.lower @ sp.diags(self.d) @ self.lower.T).tocsr()
        inverse = np.argsort(self.perm)
        return product[inverse][:, inverse].tocsr()


def _lower_columns(A, tau, perm):
    shifted = ShiftedOperator(A, tau).to_scipy()
    permuted = shifted[perm][:, perm]
    return sp.tril(permuted).tocsc()


def ildl_factorize(A, tau, drop_tol, boost_rtol=None):
    """
    Left-looking (Crout) incomplete factorization of ``P (A - tau I) P^T``.

    Column ``k`` of ``L`` keeps entries with ``|l_ik| > t * ||l_k||_2``, so
    ``t = 0`` gives the complete factorization. Pivots with ``|d_k|`` below
    ``boost_rtol * max|a_ii - tau|`` are replaced by ``+-`` that value.

    :param A: symmetric :class:`spectra_count.sparse.CsrMatrix`
    :param tau: shift
    :param drop_tol: drop tolerance ``t >= 0``
    :rtype: spectra_count.preconditioners.ildl.IldlFactors
    """

    if drop_tol < 0:
        raise ContractViolation(f"Drop tolerance must be non-negative, got {drop_tol}")
    if not A.symmetric:
        raise ContractViolation("Incomplete LDL^T requires a symmetric matrix")

    n = A.n
    pattern = A.to_scipy().copy()
    pattern.data = np.ones_like(pattern.data)
    perm = np.asarray(reverse_cuthill_mckee(pattern.tocsr(), symmetric_mode=True), dtype=np.int64)

    columns = _lower_columns(A, tau, perm)
    reference = float(np.max(np.abs(columns.diagonal()))) if n else 0.0

    col_rows = [None] * n
    col_vals = [None] * n
    first = np.zeros(n, dtype=np.int64)
    row_members = [[] for _ in range(n)]
    d = np.zeros(n)
    boosted = 0

    work = np.zeros(n)
    touched = np.zeros(n, dtype=bool)

    for k in range(n):
        start, end = columns.indptr[k], columns.indptr[k + 1]
        rows = columns.indices[start:end]
        work[rows] = columns.data[start:end]
        touched[rows] = True
        pattern_rows = [rows]

        for j in row_members[k]:
            position = first[j]
            j_rows = col_rows[j][position:]
            j_vals = col_vals[j][position:]
            # j_rows[0] == k by construction of row_members
            work[j_rows] -= j_vals * (d[j] * j_vals[0])
            fresh = j_rows[~touched[j_rows]]
            touched[fresh] = True
            pattern_rows.append(fresh)
            first[j] = position + 1

        rows = np.unique(np.concatenate(pattern_rows)) if len(pattern_rows) > 1 else np.sort(rows)
        pivot = work[k]

        boosted_pivot, was_boosted = boost_pivots([pivot], boost_rtol, reference)
        d[k] = boosted_pivot[0]
        boosted += was_boosted

        below = rows[rows > k]
        values = work[below] / d[k]

        if len(values):
            norm = np.linalg.norm(values)
            keep = np.abs(values) > drop_tol * norm
            below, values = below[keep], values[keep]

        col_rows[k] = below
        col_vals[k] = values
        for i in below:
            row_members[i].append(k)

        work[rows] = 0.0
        touched[rows] = False

    if boosted:
        logger.warning("Boosted %d near-zero pivots in incomplete LDL^T (tau=%r)", boosted, tau)

    counts = np.array([len(rows) for rows in col_rows], dtype=np.int64)
    lower_rows = np.concatenate([np.arange(n)] + [r for r in col_rows]) if n else np.empty(0, dtype=np.int64)
    lower_cols = np.concatenate([np.arange(n), np.repeat(np.arange(n), counts)]) if n else np.empty(0, dtype=np.int64)
    lower_vals = np.concatenate([np.ones(n)] + [v for v in col_vals]) if n else np.empty(0)

    lower = sp.coo_matrix((lower_vals, (lower_rows, lower_cols)), shape=(n, n)).tocsr()
    lower.sort_indices()

    return IldlFactors(lower, d, perm, float(drop_tol), boosted, float(tau))


def make_abs_ildl(factors, name="ildl"):
    """
    Factored preconditioner ``M = |D|^(-1/2) L^-1 P`` and
    ``M* = P^T L^-T |D|^(-1/2)``.

    :param factors: :class:`IldlFactors`
    :rtype: spectra_count.preconditioner.FactoredPreconditioner
    """

    lower = factors.lower
    upper = lower.T.tocsr()
    scale = 1.0 / np.sqrt(np.abs(factors.d))
    perm = factors.perm

    def apply_m(v):
        v = np.ravel(v)
        return scale * spsolve_triangular(lower, v[perm], lower=True, unit_diagonal=True)

    def apply_m_adjoint(v):
        v = np.ravel(v)
        solved = spsolve_triangular(upper, scale * v, lower=False, unit_diagonal=True)
        out = np.empty_like(solved)
        out[perm] = solved
        return out

    info = {
        "boosted_pivots": factors.boosted,
        "drop_tol": factors.drop_tol,
        "fill": int(lower.nnz),
        "negative_pivots": factors.negative_pivots,
    }

    return FactoredPreconditioner(factors.n, apply_m, apply_m_adjoint, name=name, info=info)


def make_ildl(A, tau, drop_tol):
    started = time.perf_counter()
    factors = ildl_factorize(A, tau, drop_tol)
    elapsed = time.perf_counter() - started

    logger.info(
        "Incomplete LDL^T with t=%g: %d entries in L, %d negative pivots (%.2fs)",
        drop_tol, factors.lower.nnz, factors.negative_pivots, elapsed,
    )

    return make_abs_ildl(factors)


def make_ldl_exact(A, tau):
    """Complete ``LDL^T`` with ``|D|``, the ideal preconditioner up to pivot boosts."""
    factors = ildl_factorize(A, tau, 0.0)
    return make_abs_ildl(factors, name="ldl-exact")
