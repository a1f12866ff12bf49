"""
Five-point finite difference Laplacian on the unit square with homogeneous
Dirichlet boundary and ``1/h**2`` scaling, together with its closed-form
spectrum.
"""

import numpy as np
import scipy.sparse as sp

from .exceptions import ContractViolation
from .sparse import CsrMatrix


def _check_refinement(s):
    if int(s) != s or s < 2:
        raise ContractViolation(f"Mesh refinement must be an integer >= 2, got {s}")
    return int(s)


def gen_laplace_2d(s):
    """
    Generate the 2D Laplacian with mesh size ``h = 2**-s``.

    :param s: mesh refinement, at least 2
    :returns: :class:`CsrMatrix` of dimension ``(2**s - 1)**2`` tagged
        ``("laplace", s)``
    """

    s = _check_refinement(s)
    size = 2 ** s - 1
    inv_h_sq = float(4 ** s)

    second_difference = sp.diags(
        [-np.ones(size - 1), 2.0 * np.ones(size), -np.ones(size - 1)],
        [-1, 0, 1],
    )
    eye = sp.identity(size)
    matrix = ((sp.kron(eye, second_difference) + sp.kron(second_difference, eye)) * inv_h_sq).tocsr()
    matrix.eliminate_zeros()

    return CsrMatrix.from_scipy(matrix, tag=("laplace", s))


def _one_dimensional_terms(s):
    h = 2.0 ** -s
    i = np.arange(1, 2 ** s)
    return (4.0 / h ** 2) * np.sin(i * np.pi * h / 2.0) ** 2


def laplace_eigenvalues(s):
    """All ``(2**s - 1)**2`` eigenvalues of :func:`gen_laplace_2d`, ascending."""
    s = _check_refinement(s)
    terms = _one_dimensional_terms(s)
    return np.sort(np.add.outer(terms, terms).ravel())


def count_laplace_eigs_below(s, tau):
    """
    Count eigenvalues of :func:`gen_laplace_2d` strictly below ``tau`` using
    ``lambda_ij = (4/h**2) * (sin(i*pi*h/2)**2 + sin(j*pi*h/2)**2)``.
    """

    s = _check_refinement(s)
    terms = _one_dimensional_terms(s)
    return int(np.count_nonzero(np.add.outer(terms, terms) < tau))


def laplace_shift_at_fraction(s, fraction):
    """
    Shift placed in the middle of a spectral gap so that roughly ``fraction``
    of the eigenvalues lie below it. Used to compare meshes at the same
    relative position in the spectrum.
    """

    if not 0.0 < fraction < 1.0:
        raise ContractViolation(f"Fraction must lie in (0, 1), got {fraction}")

    values = laplace_eigenvalues(s)
    scale = values[-1]
    index = max(1, int(round(fraction * len(values))))

    # move up until the gap is not a numerical tie
    while index < len(values) and values[index] - values[index - 1] <= 1e-9 * scale:
        index += 1
    if index == len(values):
        raise ContractViolation(f"No spectral gap above fraction {fraction}")

    return float(0.5 * (values[index - 1] + values[index]))
