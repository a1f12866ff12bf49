import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from .exceptions import ContractViolation
from .settings import get_setting


class CsrMatrix:
    """
    Immutable square matrix in compressed sparse row storage. Columns in
    every row are strictly increasing. Matrices flagged symmetric are checked
    structurally and numerically on construction.

    :ivar ~.tag: Provenance of generated matrices, e.g. ``("laplace", 7)``
    """

    __slots__ = ("_data", "tag", "symmetric")

    def __init__(self, n, row_ptr, col_idx, values, symmetric=True, tag=None):
        row_ptr = np.array(row_ptr, dtype=np.int64)
        col_idx = np.array(col_idx, dtype=np.int64)
        values = np.array(values, dtype=float)

        _check_structure(n, row_ptr, col_idx, values)

        self._data = sp.csr_matrix((values, col_idx, row_ptr), shape=(n, n))
        # strictly increasing columns, scipy must not try to sort the frozen arrays
        self._data.has_sorted_indices = True
        self._data.has_canonical_format = True
        self.tag = tag
        self.symmetric = symmetric

        for array in (self._data.data, self._data.indices, self._data.indptr):
            array.flags.writeable = False

        if symmetric and not self.is_symmetric():
            raise ContractViolation("Matrix flagged symmetric is not symmetric")

    @classmethod
    def from_scipy(cls, matrix, symmetric=True, tag=None):
        """Create matrix from any scipy sparse matrix or dense array."""
        csr = sp.csr_matrix(matrix, dtype=float, copy=True)
        if csr.shape[0] != csr.shape[1]:
            raise ContractViolation(f"Matrix is not square: {csr.shape}")
        csr.sum_duplicates()
        csr.sort_indices()
        return cls(csr.shape[0], csr.indptr, csr.indices, csr.data, symmetric=symmetric, tag=tag)

    @property
    def n(self):
        return self._data.shape[0]

    @property
    def shape(self):
        return self._data.shape

    @property
    def nnz(self):
        return self._data.nnz

    @property
    def row_ptr(self):
        return self._data.indptr

    @property
    def col_idx(self):
        return self._data.indices

    @property
    def values(self):
        return self._data.data

    def to_scipy(self):
        return self._data

    def todense(self):
        return self._data.toarray()

    def diagonal(self):
        return self._data.diagonal()

    def max_abs(self):
        return float(np.max(np.abs(self.values))) if self.nnz else 0.0

    def is_symmetric(self, rtol=None):
        if rtol is None:
            rtol = get_setting("symmetry_rtol")

        pattern = self._data.copy()
        pattern.data = np.ones_like(pattern.data)
        if (pattern != pattern.T).nnz:
            return False

        difference = self._data - self._data.T
        if not difference.nnz:
            return True
        return float(np.max(np.abs(difference.data))) <= rtol * self.max_abs()

    def matvec(self, x):
        return self._data @ x

    def __repr__(self):
        return f"CsrMatrix(n={self.n}, nnz={self.nnz}, tag={self.tag})"


def _check_structure(n, row_ptr, col_idx, values):
    if n < 0:
        raise ContractViolation(f"Negative dimension: {n}")
    if len(row_ptr) != n + 1:
        raise ContractViolation("row_ptr must have n + 1 entries")
    if row_ptr[0] != 0 or np.any(np.diff(row_ptr) < 0):
        raise ContractViolation("row_ptr must start at 0 and be non-decreasing")
    if row_ptr[-1] != len(col_idx) or len(col_idx) != len(values):
        raise ContractViolation("row_ptr[n] must equal the number of stored entries")
    if len(col_idx) and (col_idx.min() < 0 or col_idx.max() >= n):
        raise ContractViolation("Column index out of range")

    steps = np.diff(col_idx)
    row_starts = row_ptr[1:-1]
    inside_row = np.ones(len(steps), dtype=bool)
    inside_row[row_starts[(row_starts > 0) & (row_starts < len(col_idx))] - 1] = False
    if np.any(steps[inside_row] <= 0):
        raise ContractViolation("Column indices must be strictly increasing within rows")


def matvec(A, x):
    """
    Multiply matrix by a vector.

    :param A: :class:`CsrMatrix`
    :param x: vector of length ``A.n``
    :returns: ``A @ x``
    """

    x = np.asarray(x)
    if x.shape != (A.n,):
        raise ContractViolation(f"Vector of shape {x.shape} does not match dimension {A.n}")
    return A.matvec(x)


class ShiftedOperator:
    """The operator ``A - shift * I`` applied without forming it."""

    __slots__ = ("base", "shift")

    def __init__(self, base, shift):
        self.base = base
        self.shift = float(shift)

    @property
    def n(self):
        return self.base.n

    def apply(self, v):
        out = self.base.matvec(v)
        out -= self.shift * v
        return out

    def to_scipy(self):
        """Assembled ``A - shift * I`` in csr format."""
        return (self.base.to_scipy() - self.shift * sp.identity(self.n, format="csr")).tocsr()

    def as_operator(self):
        return LinearOperator((self.n, self.n), matvec=self.apply, dtype=float)


def as_operator(obj):
    """
    Uniform operator handle for Krylov methods.

    Accepts :class:`CsrMatrix`, :class:`ShiftedOperator`, dense arrays,
    scipy matrices and scipy linear operators.
    """

    if isinstance(obj, LinearOperator):
        return obj
    if isinstance(obj, ShiftedOperator):
        return obj.as_operator()
    if isinstance(obj, CsrMatrix):
        return aslinearoperator(obj.to_scipy())
    return aslinearoperator(obj)
