import numpy as np

from ..logger import logger
from ..preconditioner import FactoredPreconditioner
from ..settings import get_setting


def boost_pivots(values, boost_rtol=None, reference=None):
    """
    Replace entries with ``|d| < delta`` by ``sign(d) * delta`` where
    ``delta = boost_rtol * reference`` (``max|values|`` by default) and
    ``sign(0) = +1``.

    :returns: tuple of boosted copy and number of replaced entries
    """

    if boost_rtol is None:
        boost_rtol = get_setting("boost_rtol")

    values = np.array(values, dtype=float)
    if reference is None:
        reference = float(np.max(np.abs(values))) if len(values) else 0.0

    delta = boost_rtol * (reference if reference > 0 else 1.0)
    small = np.abs(values) < delta
    values[small] = np.where(values[small] < 0, -delta, delta)

    return values, int(np.count_nonzero(small))


def make_abs_diagonal(A, tau, boost_rtol=None):
    """
    Diagonal preconditioner ``M = diag(|a_ii - tau|^(-1/2))``.

    Every nonzero ``a_ii - tau`` is used as is, however small. Only entries
    that vanish (zero or below the smallest normal float) are boosted to
    ``boost_rtol * max|a_ii - tau|``.

    :param A: :class:`spectra_count.sparse.CsrMatrix`
    :param tau: shift
    :rtype: spectra_count.preconditioner.FactoredPreconditioner
    """

    shifted = A.diagonal() - tau
    vanishing = np.abs(shifted) < np.finfo(float).tiny
    boosted = 0

    if np.any(vanishing):
        reference = float(np.max(np.abs(shifted)))
        shifted[vanishing], boosted = boost_pivots(shifted[vanishing], boost_rtol, reference)
        logger.warning("Boosted %d vanishing diagonal entries of A - tau*I (tau=%r)", boosted, tau)

    scale = 1.0 / np.sqrt(np.abs(shifted))

    def apply(v):
        return scale * v

    return FactoredPreconditioner(A.n, apply, apply, name="absdiag", info={"boosted_pivots": boosted})
