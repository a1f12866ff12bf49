"""
Baseline estimator that expands the step function in Chebyshev polynomials
of the shifted and rescaled matrix instead of using Krylov quadrature.
"""

import numpy as np

from ..estimator import Estimator, Method, RngKind, Sample, require_shift, sample_vector
from ..exceptions import ContractViolation
from ..krylov import lanczos
from ..logger import logger
from ..settings import get_setting
from ..sparse import ShiftedOperator


# random stream reserved for the spectral bounds vector
BOUNDS_STREAM = 2 ** 32 - 1


def spectral_bounds(A, tau, seed=0, steps=None, margin=None):
    """
    Interval ``[a, b]`` enclosing the spectrum of ``A - tau I``: extreme Ritz
    values of a short Lanczos run widened by ``margin`` times their span on
    both sides.
    """

    if steps is None:
        steps = get_setting("bounds_steps")
    if margin is None:
        margin = get_setting("bounds_margin")

    start = sample_vector(seed, 0, A.n, RngKind.GAUSSIAN, stream=BOUNDS_STREAM)
    dec = lanczos(ShiftedOperator(A, tau), start, min(steps, A.n))

    ritz = np.linalg.eigvalsh(dec.section())
    low, high = float(ritz[0]), float(ritz[-1])

    span = high - low
    if span <= 0.0:
        span = max(abs(low), 1.0)

    return low - margin * span, high + margin * span


def step_coefficients(a, b, degree):
    """
    Chebyshev coefficients ``c_0 .. c_degree`` of the indicator of ``x < 0``
    on ``[a, b]`` after mapping it to ``[-1, 1]``. With ``t0 = cos(theta0)``
    the image of zero, ``c_0 = (pi - theta0) / pi`` and
    ``c_j = -2 sin(j theta0) / (j pi)``.
    """

    if not a < b:
        raise ContractViolation(f"Empty spectral interval [{a}, {b}]")
    if int(degree) != degree or degree < 0:
        raise ContractViolation(f"Degree must be a non-negative integer, got {degree}")

    t0 = -(a + b) / (b - a)
    theta0 = np.arccos(np.clip(t0, -1.0, 1.0))

    j = np.arange(1, int(degree) + 1)
    coefficients = np.empty(int(degree) + 1)
    coefficients[0] = (np.pi - theta0) / np.pi
    coefficients[1:] = -2.0 * np.sin(j * theta0) / (j * np.pi)

    return coefficients


class ChebyshevEstimator(Estimator):
    def __init__(self, A, cfg, degree=None, stream=0, threads=None):
        super().__init__(A, cfg, stream=stream, threads=threads)

        if cfg.method is not Method.CHEBYSHEV:
            raise ContractViolation(f"Chebyshev estimator cannot run method '{cfg.method.value}'")

        self.degree = cfg.k if degree is None else int(degree)
        self.bounds = None
        self.coefficients = None
        self.shifted = None

    def prepare(self):
        tau = require_shift(self.cfg)

        self.shifted = ShiftedOperator(self.A, tau)
        self.bounds = spectral_bounds(self.A, tau, seed=self.cfg.seed)
        self.coefficients = step_coefficients(*self.bounds, self.degree)

        logger.debug("Chebyshev bounds [%.6g, %.6g], degree %d", *self.bounds, self.degree)

    def _rescaled(self, v):
        a, b = self.bounds
        return (2.0 * self.shifted.apply(v) - (a + b) * v) / (b - a)

    def estimate_sample(self, j):
        v = self.draw(j)
        c = self.coefficients

        previous, current = v, self._rescaled(v)
        value = c[0] * (v @ previous)
        if self.degree >= 1:
            value += c[1] * (v @ current)

        for order in range(2, self.degree + 1):
            previous, current = current, 2.0 * self._rescaled(current) - previous
            value += c[order] * (v @ current)

        return Sample(float(value), self.degree, self.degree, [], 0.0, 0)


def estimate_count_chebyshev(A, cfg, degree=None, stream=0, threads=None):
    """
    Chebyshev-filter estimate of the number of eigenvalues of ``A`` below
    ``cfg.tau``. Unpreconditioned; ``degree`` defaults to ``cfg.k``.

    :rtype: spectra_count.estimator.EstimateReport
    """

    return ChebyshevEstimator(A, cfg, degree=degree, stream=stream, threads=threads).run()
