import numpy as np

from ..estimator import Estimator, Sample
from ..sparse import as_operator


class HutchinsonEstimator(Estimator):
    """Plain stochastic trace estimate ``(1/m) sum_j v_j^T C v_j``."""

    def __init__(self, C, cfg, stream=0, threads=None):
        super().__init__(C, cfg, stream=stream, threads=threads)
        self.operator = as_operator(C)

    @property
    def n(self):
        return self.operator.shape[0]

    def estimate_sample(self, j):
        v = self.draw(j)
        value = float(v @ np.ravel(self.operator.matvec(v)))
        return Sample(value, 1, 1, [], 0.0, 0)


def hutchinson_trace(C, cfg, stream=0, threads=None):
    """
    Estimate ``trace(C)`` with the sample vectors of ``cfg`` (``cfg.tau``,
    ``cfg.k`` and ``cfg.method`` are ignored). With Rademacher vectors the
    estimate is exact for diagonal ``C``.

    :param C: operator (see :func:`spectra_count.sparse.as_operator`)
    :rtype: spectra_count.estimator.EstimateReport
    """

    return HutchinsonEstimator(C, cfg, stream=stream, threads=threads).run()
