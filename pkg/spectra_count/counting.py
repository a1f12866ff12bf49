"""
Counting on top of the estimators: method dispatch, interval counts, exact
oracles, the search for the smallest sufficient number of steps and
spectrum slicing.
"""

from collections import namedtuple

import numpy as np

from .dense import dense_inertia_oracle
from .estimator import Method
from .estimators import estimate_count_arnoldi, estimate_count_chebyshev, estimate_count_lanczos
from .exceptions import ContractViolation
from .helpers import round_half_away
from .laplace import count_laplace_eigs_below
from .logger import logger
from .preconditioners import make_preconditioner


def estimate_count(A, cfg, preconditioner=None, stream=0, threads=None):
    """
    Estimate ``n_(A - cfg.tau I)`` with the method named by ``cfg.method``.

    :param preconditioner: prebuilt preconditioner for ``cfg.tau`` (ignored
        by the Chebyshev baseline)
    :rtype: spectra_count.estimator.EstimateReport
    """

    if cfg.method is Method.CHEBYSHEV:
        return estimate_count_chebyshev(A, cfg, stream=stream, threads=threads)
    if cfg.method is Method.ARNOLDI:
        return estimate_count_arnoldi(A, cfg, preconditioner, stream=stream, threads=threads)
    return estimate_count_lanczos(A, cfg, preconditioner, stream=stream, threads=threads)


IntervalEstimateData = namedtuple("IntervalEstimateData", ("lower", "upper", "count", "warnings"))


class IntervalEstimate(IntervalEstimateData):
    """Reports at both ends of the interval and the difference of their estimates."""

    __slots__ = ()

    def to_dict(self):
        return {
            "count": self.count,
            "lower": self.lower.to_dict(),
            "upper": self.upper.to_dict(),
            "warnings": self.warnings,
        }


def estimate_interval_count(A, cfg, preconditioners=(None, None), threads=None):
    """
    Estimate the number of eigenvalues in ``[cfg.xi, cfg.eta)`` as
    ``n_(A - eta I) - n_(A - xi I)``. The two shifts use independent random
    streams and their own preconditioners.

    :param preconditioners: pair of preconditioners for ``xi`` and ``eta``
    :rtype: spectra_count.counting.IntervalEstimate
    """

    if cfg.xi is None:
        raise ContractViolation("Configuration has no interval")

    lower_p, upper_p = preconditioners
    lower = estimate_count(A, cfg.at_shift(cfg.xi), lower_p, stream=0, threads=threads)
    upper = estimate_count(A, cfg.at_shift(cfg.eta), upper_p, stream=1, threads=threads)

    count = upper.estimate - lower.estimate
    warnings = []

    if count < 0:
        message = f"negative interval count {count}, the estimates at both ends are too noisy"
        logger.warning("Interval [%r, %r]: %s", cfg.xi, cfg.eta, message)
        warnings.append(message)

    return IntervalEstimate(lower, upper, count, warnings)


def laplace_refinement(A):
    """Mesh refinement ``s`` of a generated Laplacian, or None."""
    tag = getattr(A, "tag", None)
    if isinstance(tag, tuple) and len(tag) == 2 and tag[0] == "laplace":
        return tag[1]
    return None


def exact_count(A, tau, cap=None):
    """
    Exact number of eigenvalues of ``A`` below ``tau``. Generated Laplacians
    use the closed-form spectrum; other matrices the dense oracle, which
    refuses dimensions above ``cap``.
    """

    s = laplace_refinement(A)
    if s is not None:
        return count_laplace_eigs_below(s, tau)
    return dense_inertia_oracle(A, tau, cap=cap)


MinimalSteps = namedtuple("MinimalSteps", ("k", "report", "exact"))


def within(estimate, exact, rtol):
    return abs(estimate - exact) <= rtol * abs(exact)


def find_minimal_steps(A, tau, cfg, candidates, rtol=0.05, exact=None, threads=None):
    """
    Smallest candidate number of steps (polynomial degree for the Chebyshev
    baseline) whose estimate lies within ``rtol`` of the exact count.
    The preconditioner is built once and shared by all candidates.

    :returns: :class:`MinimalSteps`; ``k`` and ``report`` are None when no
        candidate qualifies
    """

    candidates = sorted(set(int(k) for k in candidates))
    if not candidates:
        raise ContractViolation("No candidate numbers of steps")

    if exact is None:
        exact = exact_count(A, tau)

    cfg = cfg.at_shift(tau)
    preconditioner = None
    if cfg.method is not Method.CHEBYSHEV:
        preconditioner = make_preconditioner(A, tau, cfg.preconditioner)

    for k in candidates:
        report = estimate_count(A, cfg._replace(k=k), preconditioner, threads=threads)
        logger.debug("k=%d: estimate %d, exact %d", k, report.estimate, exact)

        if within(report.estimate, exact, rtol):
            return MinimalSteps(k, report, exact)

    return MinimalSteps(None, None, exact)


SliceResultData = namedtuple("SliceResultData", (
    "breakpoints", "counts", "shifts", "cumulative", "reports", "warnings",
))


class SliceResult(SliceResultData):
    """
    :ivar ~.breakpoints: ``parts - 1`` interior slice boundaries
    :ivar ~.counts: estimated number of eigenvalues per slice
    :ivar ~.cumulative: monotone estimated counts at the probe shifts
    """

    __slots__ = ()

    def to_dict(self):
        return {
            "breakpoints": [float(x) for x in self.breakpoints],
            "counts": list(self.counts),
            "shifts": [float(x) for x in self.shifts],
            "cumulative": [float(x) for x in self.cumulative],
            "reports": [report.to_dict() for report in self.reports],
            "warnings": self.warnings,
        }


def slice_spectrum(A, lower, upper, parts, cfg, probes=None, threads=None):
    """
    Split ``[lower, upper]`` into ``parts`` slices holding about the same
    number of eigenvalues.

    Counts are estimated at ``probes`` equally spaced shifts (independent
    streams per probe), made non-decreasing by a running maximum, and the
    interior breakpoints are found by linear inverse interpolation at equal
    count fractions.

    :rtype: spectra_count.counting.SliceResult
    """

    if not lower < upper:
        raise ContractViolation(f"Slicing needs lower < upper, got [{lower}, {upper}]")
    if int(parts) != parts or parts < 1:
        raise ContractViolation(f"Number of slices must be a positive integer, got {parts}")
    if probes is None:
        probes = 2 * int(parts) + 1
    if int(probes) != probes or probes < 2:
        raise ContractViolation(f"Need at least two probes, got {probes}")

    shifts = np.linspace(lower, upper, int(probes))
    reports = [
        estimate_count(A, cfg.at_shift(shift), stream=index, threads=threads)
        for index, shift in enumerate(shifts)
    ]

    cumulative = np.maximum.accumulate([report.raw_mean for report in reports])
    total = cumulative[-1] - cumulative[0]
    warnings = []

    if total < 0.5:
        warnings.append("no eigenvalues detected in the interval, slices are equally wide")
        edges = np.linspace(lower, upper, int(parts) + 1)
    else:
        targets = cumulative[0] + total * np.arange(1, int(parts)) / parts
        edges = np.concatenate([[lower], np.interp(targets, cumulative, shifts), [upper]])

    counts_at_edges = np.interp(edges, shifts, cumulative)
    counts = [round_half_away(value) for value in np.diff(counts_at_edges)]

    logger.info("Sliced [%r, %r] into %d parts with %d probes", lower, upper, parts, probes)

    return SliceResult(edges[1:-1], counts, shifts, cumulative, reports, warnings)
