import os

import numpy as np
import scipy.sparse as sp

from .exceptions import ContractViolation, MatrixMarketError
from .helpers import file_digest
from .laplace import gen_laplace_2d
from .logger import logger
from .sparse import CsrMatrix


HEADER = "%%MatrixMarket"
SUPPORTED_FIELDS = ("real", "integer")
SUPPORTED_SYMMETRIES = ("symmetric", "general")


def _parse_header(line, path):
    tokens = line.strip().split()

    if len(tokens) != 5 or tokens[0] != HEADER:
        raise MatrixMarketError("Missing or malformed %%MatrixMarket header", path, 1)

    obj, fmt, field, symmetry = (token.lower() for token in tokens[1:])

    if obj != "matrix" or fmt != "coordinate":
        raise MatrixMarketError(f"Only 'matrix coordinate' files are supported, got '{obj} {fmt}'", path, 1)
    if field == "complex":
        raise MatrixMarketError("Complex matrices are not supported", path, 1)
    if field not in SUPPORTED_FIELDS:
        raise MatrixMarketError(f"Unsupported field '{field}'", path, 1)
    if symmetry not in SUPPORTED_SYMMETRIES:
        raise MatrixMarketError(f"Unsupported symmetry '{symmetry}'", path, 1)

    return symmetry


def _parse_ints(tokens, count, path, lineno):
    if len(tokens) != count:
        raise MatrixMarketError(f"Expected {count} values, got {len(tokens)}", path, lineno)
    try:
        return [int(token) for token in tokens]
    except ValueError:
        raise MatrixMarketError("Expected integers", path, lineno)


def read_matrix_market(path, require_symmetric=True):
    """
    Read coordinate Matrix Market file with real entries. Entries stored in
    ``symmetric`` files are mirrored and duplicate entries are summed.

    :param path: path to the ``.mtx`` file
    :param require_symmetric: reject matrices that are not symmetric
    :returns: :class:`CsrMatrix`
    """

    if not os.path.isfile(path):
        raise MatrixMarketError("File does not exist", path)

    rows, cols, vals = [], [], []
    size = None
    symmetry = None
    expected = 0

    with open(path, "r") as fh:
        for lineno, line in enumerate(fh, start=1):
            if lineno == 1:
                symmetry = _parse_header(line, path)
                continue

            stripped = line.strip()
            if not stripped or stripped.startswith("%"):
                continue

            tokens = stripped.split()

            if size is None:
                n_rows, n_cols, expected = _parse_ints(tokens, 3, path, lineno)
                if n_rows != n_cols:
                    raise MatrixMarketError(f"Matrix is not square: {n_rows}x{n_cols}", path, lineno)
                size = n_rows
                continue

            if len(tokens) != 3:
                raise MatrixMarketError(f"Expected 'row column value', got {len(tokens)} values", path, lineno)

            i, j = _parse_ints(tokens[:2], 2, path, lineno)
            try:
                value = float(tokens[2])
            except ValueError:
                raise MatrixMarketError(f"Malformed value '{tokens[2]}'", path, lineno)

            if not (1 <= i <= size and 1 <= j <= size):
                raise MatrixMarketError(f"Index ({i}, {j}) out of range", path, lineno)
            if len(vals) == expected:
                raise MatrixMarketError(f"More than {expected} entries", path, lineno)

            rows.append(i - 1)
            cols.append(j - 1)
            vals.append(value)

    if symmetry is None:
        raise MatrixMarketError("Empty file", path)
    if size is None:
        raise MatrixMarketError("Missing size line", path)
    if len(vals) != expected:
        raise MatrixMarketError(f"Expected {expected} entries, found {len(vals)}", path)

    rows = np.array(rows, dtype=np.int64)
    cols = np.array(cols, dtype=np.int64)
    vals = np.array(vals, dtype=float)

    if symmetry == "symmetric":
        off = rows != cols
        rows, cols = np.concatenate([rows, cols[off]]), np.concatenate([cols, rows[off]])
        vals = np.concatenate([vals, vals[off]])

    matrix = sp.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsr()

    try:
        result = CsrMatrix.from_scipy(matrix, symmetric=require_symmetric)
    except ContractViolation as exc:
        raise MatrixMarketError(str(exc), path)

    logger.info('Loaded %dx%d matrix with %d entries from "%s"', size, size, result.nnz, path)

    return result


def write_matrix_market(A, path, symmetric=True, comment=None):
    """
    Write matrix in coordinate format. Symmetric output stores the lower
    triangle only.
    """

    matrix = A.to_scipy()
    stored = sp.tril(matrix).tocoo() if symmetric else matrix.tocoo()
    order = np.lexsort((stored.row, stored.col))

    if os.path.dirname(path):
        os.makedirs(os.path.dirname(path), exist_ok=True)

    with open(path, "w") as fh:
        fh.write(f"{HEADER} matrix coordinate real {'symmetric' if symmetric else 'general'}\n")
        if comment:
            for line in comment.splitlines():
                fh.write(f"% {line}\n")
        fh.write(f"{A.n} {A.n} {stored.nnz}\n")
        for k in order:
            fh.write(f"{stored.row[k] + 1} {stored.col[k] + 1} {float(stored.data[k])!r}\n")


def load_matrix(path=None, laplace=None):
    """
    Load matrix from Matrix Market file or generate the Laplacian.

    :param path: path to the ``.mtx`` file
    :param laplace: mesh refinement for :func:`spectra_count.laplace.gen_laplace_2d`
    :returns: tuple of matrix and provenance dict
    """

    if (path is None) == (laplace is None):
        raise ContractViolation("Exactly one of matrix path and Laplacian refinement is required")

    if path is not None:
        return read_matrix_market(path), {"path": path, "sha256": file_digest(path)}

    matrix = gen_laplace_2d(laplace)
    logger.info("Generated Laplacian with s=%d (n=%d)", laplace, matrix.n)
    return matrix, {"generator": "laplace_2d", "s": laplace}
