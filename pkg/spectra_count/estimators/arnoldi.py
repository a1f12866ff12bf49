from ..estimator import Estimator, Method, Sample, require_shift
from ..exceptions import ContractViolation, QuadratureBreakdown
from ..krylov import arnoldi
from ..logger import logger
from ..preconditioner import as_unfactored
from ..preconditioners import make_preconditioner
from ..quadrature import apply_step_function, arnoldi_rule
from ..sparse import ShiftedOperator


class ArnoldiEstimator(Estimator):
    """
    Estimator for preconditioners known only through ``T``: quadrature on
    the Arnoldi decomposition of ``C = T (A - tau I)``, real part taken.
    A sample whose Hessenberg section is defective is drawn again once.
    """

    def __init__(self, A, cfg, preconditioner=None, stream=0, threads=None):
        super().__init__(A, cfg, stream=stream, threads=threads)

        if cfg.method is not Method.ARNOLDI:
            raise ContractViolation(f"Arnoldi estimator cannot run method '{cfg.method.value}'")

        self.preconditioner = preconditioner
        self.operator = None

    def prepare(self):
        tau = require_shift(self.cfg)

        if self.preconditioner is None:
            self.preconditioner = make_preconditioner(self.A, tau, self.cfg.preconditioner)

        self.preconditioner = as_unfactored(self.preconditioner)
        self.operator = self.preconditioner.left_product(ShiftedOperator(self.A, tau))
        self.boosted_pivots = self.preconditioner.info.get("boosted_pivots", 0)

    def _quadrature(self, j, attempt):
        dec = arnoldi(self.operator, self.draw(j, attempt), self.cfg.k)
        try:
            return dec, apply_step_function(arnoldi_rule(dec))
        except QuadratureBreakdown as exc:
            exc.matvecs = dec.matvecs
            raise

    def estimate_sample(self, j):
        warnings = []
        redraws = 0
        matvecs = 0

        try:
            dec, step = self._quadrature(j, 0)
        except QuadratureBreakdown as exc:
            logger.warning("Sample %d: %s; drawing it again", j, exc)
            warnings.append(f"defective Hessenberg section, vector drawn again ({exc})")
            redraws = 1
            matvecs = exc.matvecs
            dec, step = self._quadrature(j, 1)

        if step.near_zero:
            warnings.append("a quadrature node lies within rounding of zero, tau may be an eigenvalue")

        return Sample(step.value, dec.steps_completed, matvecs + dec.matvecs, warnings, step.imag, redraws)


def estimate_count_arnoldi(A, cfg, t=None, stream=0, threads=None):
    """
    Preconditioned Arnoldi-type estimate of the number of eigenvalues of
    ``A`` below ``cfg.tau``.

    :param t: preconditioner (factored ones are used through ``M* M``);
        built from ``cfg.preconditioner`` when omitted
    :rtype: spectra_count.estimator.EstimateReport
    """

    return ArnoldiEstimator(A, cfg, preconditioner=t, stream=stream, threads=threads).run()
