from .arnoldi import ArnoldiEstimator, estimate_count_arnoldi
from .chebyshev import ChebyshevEstimator, estimate_count_chebyshev, spectral_bounds, step_coefficients
from .hutchinson import HutchinsonEstimator, hutchinson_trace
from .lanczos import LanczosEstimator, estimate_count_lanczos

__all__ = [
    "ArnoldiEstimator", "estimate_count_arnoldi",
    "ChebyshevEstimator", "estimate_count_chebyshev", "spectral_bounds", "step_coefficients",
    "HutchinsonEstimator", "hutchinson_trace",
    "LanczosEstimator", "estimate_count_lanczos",
]
