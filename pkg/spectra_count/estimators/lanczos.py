from ..estimator import Estimator, Method, Sample, require_shift
from ..exceptions import ContractViolation
from ..krylov import lanczos
from ..preconditioners import make_preconditioner
from ..quadrature import apply_step_function, ga_rule, gauss_rule
from ..sparse import ShiftedOperator


class LanczosEstimator(Estimator):
    """
    Estimator of ``n_(A - tau I)`` as the mean of ``v^T h(C) v`` over random
    ``v``, with ``C = M (A - tau I) M*`` and Gauss (or generalized averaged
    Gauss) quadrature from ``k`` Lanczos steps.
    """

    def __init__(self, A, cfg, preconditioner=None, stream=0, threads=None):
        super().__init__(A, cfg, stream=stream, threads=threads)

        if cfg.method not in (Method.LANCZOS, Method.LANCZOS_GA):
            raise ContractViolation(f"Lanczos estimator cannot run method '{cfg.method.value}'")

        self.preconditioner = preconditioner
        self.operator = None
        self.rule = ga_rule if cfg.method is Method.LANCZOS_GA else gauss_rule

    def prepare(self):
        tau = require_shift(self.cfg)

        if self.preconditioner is None:
            self.preconditioner = make_preconditioner(self.A, tau, self.cfg.preconditioner)
        if not self.preconditioner.factored:
            raise ContractViolation("Lanczos estimator needs a factored preconditioner")

        self.operator = self.preconditioner.congruence(ShiftedOperator(self.A, tau))
        self.boosted_pivots = self.preconditioner.info.get("boosted_pivots", 0)

    def estimate_sample(self, j):
        dec = lanczos(self.operator, self.draw(j), self.cfg.k)
        step = apply_step_function(self.rule(dec))

        warnings = []
        if step.near_zero:
            warnings.append("a quadrature node lies within rounding of zero, tau may be an eigenvalue")

        return Sample(step.value, dec.steps_completed, dec.matvecs, warnings, 0.0, 0)


def estimate_count_lanczos(A, cfg, p=None, stream=0, threads=None):
    """
    Preconditioned Lanczos-type estimate of the number of eigenvalues of
    ``A`` below ``cfg.tau``.

    :param A: :class:`spectra_count.sparse.CsrMatrix`
    :param cfg: :class:`spectra_count.estimator.CountConfig` with method
        "lanczos" or "lanczos-ga"
    :param p: factored preconditioner; built from ``cfg.preconditioner``
        when omitted
    :param stream: random stream of the sample vectors
    :rtype: spectra_count.estimator.EstimateReport
    """

    return LanczosEstimator(A, cfg, preconditioner=p, stream=stream, threads=threads).run()
