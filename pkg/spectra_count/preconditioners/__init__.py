import time

from ..logger import logger
from ..preconditioner import PreconditionerSpec, identity_preconditioner
from .diagonal import make_abs_diagonal
from .ildl import IldlFactors, ildl_factorize, make_abs_ildl, make_ildl, make_ldl_exact


def make_preconditioner(A, tau, spec=None):
    """
    Build preconditioner for ``A - tau I`` described by ``spec``.

    :param A: :class:`spectra_count.sparse.CsrMatrix`
    :param tau: shift
    :param spec: :class:`spectra_count.preconditioner.PreconditionerSpec`
        or a kind name
    :rtype: spectra_count.preconditioner.FactoredPreconditioner
    """

    if spec is None:
        spec = PreconditionerSpec.new()
    elif isinstance(spec, str):
        spec = PreconditionerSpec.new(spec)

    started = time.perf_counter()

    if spec.kind == "none":
        preconditioner = identity_preconditioner(A.n)
    elif spec.kind == "absdiag":
        preconditioner = make_abs_diagonal(A, tau)
    elif spec.kind == "ildl":
        preconditioner = make_ildl(A, tau, spec.drop_tol)
    else:
        preconditioner = make_ldl_exact(A, tau)

    preconditioner.info["factorize_time"] = time.perf_counter() - started
    logger.debug("Built '%s' preconditioner for tau=%r", preconditioner.name, tau)

    return preconditioner


__all__ = [
    "IldlFactors",
    "ildl_factorize",
    "make_abs_diagonal",
    "make_abs_ildl",
    "make_ildl",
    "make_ldl_exact",
    "make_preconditioner",
]
