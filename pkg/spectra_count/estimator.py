import math
import time
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from enum import Enum

import numpy as np

from .exceptions import ContractViolation
from .helpers import round_half_away
from .logger import logger
from .preconditioner import PreconditionerSpec
from .settings import get_setting, resolve_threads


class Method(Enum):
    LANCZOS = "lanczos"
    LANCZOS_GA = "lanczos-ga"
    ARNOLDI = "arnoldi"
    CHEBYSHEV = "chebyshev"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower().replace("_", "-"))
        except ValueError:
            names = ", ".join(method.value for method in cls)
            raise ContractViolation(f"Unknown method '{value}', expected one of {names}")


class RngKind(Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ContractViolation(f"Unknown random vector kind '{value}'")


CountConfigData = namedtuple("CountConfigData", (
    "tau", "xi", "eta", "k", "m", "seed", "method", "rng", "preconditioner", "threads",
))


class CountConfig(CountConfigData):
    __slots__ = ()

    @classmethod
    def new(
        cls, tau=None, k=10, m=None, seed=0, method="lanczos", rng="gaussian",
        preconditioner=None, xi=None, eta=None, threads=None,
    ):
        """
        Create validated estimator configuration. Either ``tau`` or the
        interval ``xi < eta`` is expected; ``k`` is the number of Krylov steps
        (the polynomial degree for the Chebyshev baseline).

        :rtype: spectra_count.estimator.CountConfig
        """

        if m is None:
            m = get_setting("samples")

        if int(k) != k or k < 1:
            raise ContractViolation(f"Number of steps must be a positive integer, got {k}")
        if int(m) != m or m < 1:
            raise ContractViolation(f"Number of samples must be a positive integer, got {m}")
        if int(seed) != seed or not 0 <= seed < 2 ** 64:
            raise ContractViolation(f"Seed must be an unsigned 64-bit integer, got {seed}")
        if (xi is None) != (eta is None):
            raise ContractViolation("Interval needs both xi and eta")
        if xi is not None and not xi < eta:
            raise ContractViolation(f"Interval endpoints must satisfy xi < eta, got [{xi}, {eta}]")
        if threads is not None and threads < 1:
            raise ContractViolation(f"Number of threads must be positive, got {threads}")

        if preconditioner is None or isinstance(preconditioner, str):
            preconditioner = PreconditionerSpec.new(preconditioner or "none")

        return cls(
            None if tau is None else float(tau),
            None if xi is None else float(xi),
            None if eta is None else float(eta),
            int(k),
            int(m),
            int(seed),
            Method.parse(method),
            RngKind.parse(rng),
            preconditioner,
            threads,
        )

    def at_shift(self, tau):
        return self._replace(tau=float(tau))

    def to_dict(self):
        return {
            "tau": self.tau,
            "xi": self.xi,
            "eta": self.eta,
            "k": self.k,
            "m": self.m,
            "seed": self.seed,
            "method": self.method.value,
            "rng": self.rng.value,
            "preconditioner": self.preconditioner.to_dict(),
        }


Sample = namedtuple("Sample", ("value", "k_eff", "matvecs", "warnings", "imag", "redraws"))


class EstimateReport:
    """
    Aggregated result of a stochastic estimator.

    :ivar ~.estimate: rounded mean (halves away from zero)
    :ivar ~.raw_mean: mean of per-sample values
    :ivar ~.per_sample: quadrature value of every sample, in index order
    :ivar ~.std_error: sample standard deviation over ``sqrt(m)``
    :ivar ~.per_sample_k_eff: completed Krylov steps of every sample
    :ivar ~.warnings: messages for conditions that do not stop the estimate
    """

    def __init__(
        self, per_sample, per_sample_k_eff, config, warnings=(), matvecs=0,
        redraws=0, max_imag=0.0, boosted_pivots=0, elapsed=0.0,
    ):
        values = np.asarray(per_sample, dtype=float)

        self.per_sample = [float(value) for value in values]
        self.per_sample_k_eff = [int(k) for k in per_sample_k_eff]
        self.raw_mean = float(np.mean(values))
        self.estimate = round_half_away(self.raw_mean)
        self.std_error = float(np.std(values, ddof=1) / math.sqrt(len(values))) if len(values) > 1 else 0.0
        self.config = config
        self.seed = config.seed
        self.warnings = list(warnings)
        self.matvecs = int(matvecs)
        self.redraws = int(redraws)
        self.max_imag = float(max_imag)
        self.boosted_pivots = int(boosted_pivots)
        self.elapsed = float(elapsed)

    @classmethod
    def from_samples(cls, samples, config, warnings=(), **kwargs):
        collected = list(warnings)
        for j, sample in enumerate(samples):
            collected.extend(f"sample {j}: {message}" for message in sample.warnings)

        return cls(
            [sample.value for sample in samples],
            [sample.k_eff for sample in samples],
            config,
            warnings=collected,
            matvecs=sum(sample.matvecs for sample in samples),
            redraws=sum(sample.redraws for sample in samples),
            max_imag=max((abs(sample.imag) for sample in samples), default=0.0),
            **kwargs,
        )

    def to_dict(self):
        """Fields that go into the JSON report; ``elapsed`` belongs to the manifest."""
        return {
            "estimate": self.estimate,
            "raw_mean": self.raw_mean,
            "std_error": self.std_error,
            "per_sample": self.per_sample,
            "per_sample_k_eff": self.per_sample_k_eff,
            "warnings": self.warnings,
            "seed": self.seed,
            "config": self.config.to_dict(),
            "matvecs": self.matvecs,
            "redraws": self.redraws,
            "max_imag": self.max_imag,
            "boosted_pivots": self.boosted_pivots,
        }

    def __repr__(self):
        return f"EstimateReport(estimate={self.estimate}, raw_mean={self.raw_mean:.6g}, m={len(self.per_sample)})"


def make_generator(seed, *key):
    """Counter-based generator that depends on ``(seed, *key)`` only."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(part) for part in key))
    return np.random.Generator(np.random.Philox(sequence))


def sample_vector(seed, index, n, rng_kind="gaussian", stream=0, attempt=0):
    """
    Random vector number ``index`` of the stream ``(seed, stream)``. The
    result does not depend on the order in which vectors are drawn.

    :param rng_kind: "gaussian" (standard normal) or "rademacher" (+-1)
    :param attempt: redraw counter; 0 for the first draw
    """

    key = (stream, index, attempt) if attempt else (stream, index)
    generator = make_generator(seed, *key)

    if RngKind.parse(rng_kind) is RngKind.RADEMACHER:
        return np.where(generator.integers(0, 2, size=n) == 1, 1.0, -1.0)
    return generator.standard_normal(n)


class Estimator:
    """
    Shared sample loop of the stochastic estimators. Subclasses implement
    :meth:`estimate_sample`; samples run on a thread pool and are reduced in
    index order, so results do not depend on the number of workers.
    """

    def __init__(self, A, cfg, stream=0, threads=None):
        self.A = A
        self.cfg = cfg
        self.stream = stream
        self.threads = resolve_threads(threads if threads is not None else cfg.threads)
        self.warnings = []
        self.boosted_pivots = 0

    @property
    def n(self):
        return self.A.n

    def prepare(self):
        pass

    def draw(self, j, attempt=0):
        return sample_vector(self.cfg.seed, j, self.n, self.cfg.rng, self.stream, attempt)

    def estimate_sample(self, j):
        raise NotImplementedError

    def _guarded(self, j):
        try:
            sample = self.estimate_sample(j)
        except Exception as exc:
            exc.sample = j
            raise

        logger.debug("Sample %d: value=%.6g, k_eff=%d", j, sample.value, sample.k_eff)
        return sample

    def run(self):
        started = time.perf_counter()
        self.prepare()

        indices = range(self.cfg.m)
        if self.threads == 1:
            samples = [self._guarded(j) for j in indices]
        else:
            with ThreadPoolExecutor(max_workers=self.threads) as executor:
                samples = list(executor.map(self._guarded, indices))

        elapsed = time.perf_counter() - started

        report = EstimateReport.from_samples(
            samples, self.cfg, warnings=self.warnings,
            boosted_pivots=self.boosted_pivots, elapsed=elapsed,
        )

        logger.info(
            "%s: estimate %d (mean %.4f +- %.4f) from %d samples in %.2fs",
            self.get_identity(), report.estimate, report.raw_mean, report.std_error, self.cfg.m, elapsed,
        )

        return report

    @classmethod
    def get_identity(cls):
        return cls.__name__.lower()


def require_shift(cfg):
    if cfg.tau is None:
        raise ContractViolation("Configuration has no shift tau")
    return cfg.tau
