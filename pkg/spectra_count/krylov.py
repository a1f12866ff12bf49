import numpy as np

from .dense import TridiagonalSym
from .exceptions import ContractViolation, KrylovError
from .logger import logger
from .settings import get_setting
from .sparse import as_operator


class LanczosDecomposition:
    """
    Result of :func:`lanczos`: ``C Q_k = Q_{k+1} J_{k+1,k}``.

    :ivar ~.alphas: diagonal of ``J_k``
    :ivar ~.betas: sub-diagonal of ``J_{k+1,k}`` (``beta_2 .. beta_{k+1}``);
        after a breakdown the last entry is the negligible ``beta``
    :ivar ~.basis: orthonormal basis, ``k + 1`` columns (``k`` after a breakdown)
    :ivar ~.steps_completed: number of steps ``k_eff``
    :ivar ~.breakdown: whether the Krylov space became invariant
    :ivar ~.vnorm: norm of the starting vector
    :ivar ~.matvecs: number of operator applications
    """

    __slots__ = ("alphas", "betas", "basis", "steps_completed", "breakdown", "vnorm", "matvecs")

    def __init__(self, alphas, betas, basis, breakdown, vnorm, matvecs):
        self.alphas = np.asarray(alphas, dtype=float)
        self.betas = np.asarray(betas, dtype=float)
        self.basis = basis
        self.steps_completed = len(self.alphas)
        self.breakdown = breakdown
        self.vnorm = vnorm
        self.matvecs = matvecs

    @property
    def tridiagonal(self):
        """Leading ``k_eff x k_eff`` section ``J_k``."""
        return TridiagonalSym.new(self.alphas, self.betas[:-1])

    @property
    def beta_next(self):
        """``beta_{k+1}``, or None after a breakdown."""
        return None if self.breakdown else float(self.betas[-1])

    def section(self):
        return self.tridiagonal.todense()

    def extended_section(self):
        """``J_{k+1,k}`` as a dense ``(k+1) x k`` array."""
        k = self.steps_completed
        extended = np.zeros((k + 1, k))
        extended[:k, :] = self.section()
        extended[k, k - 1] = self.betas[-1]
        return extended


class ArnoldiDecomposition:
    """
    Result of :func:`arnoldi`: ``C Q_k = Q_{k+1} H_{k+1,k}``.

    :ivar ~.extended_hessenberg: ``(k_eff + 1) x k_eff`` upper Hessenberg array
    :ivar ~.basis: orthonormal basis, ``k + 1`` columns (``k`` after a breakdown)
    """

    __slots__ = ("extended_hessenberg", "basis", "steps_completed", "breakdown", "vnorm", "matvecs")

    def __init__(self, extended_hessenberg, basis, breakdown, vnorm, matvecs):
        self.extended_hessenberg = extended_hessenberg
        self.basis = basis
        self.steps_completed = extended_hessenberg.shape[1]
        self.breakdown = breakdown
        self.vnorm = vnorm
        self.matvecs = matvecs

    @property
    def hessenberg(self):
        """Leading square section ``H_k``."""
        k = self.steps_completed
        return self.extended_hessenberg[:k, :k]

    def section(self):
        return self.hessenberg


def _start(C, v, k):
    operator = as_operator(C)
    v = np.asarray(v, dtype=float)

    if operator.shape[0] != operator.shape[1]:
        raise ContractViolation(f"Operator is not square: {operator.shape}")
    if v.shape != (operator.shape[0],):
        raise ContractViolation(f"Starting vector of shape {v.shape} does not match operator {operator.shape}")
    if int(k) != k or k < 1:
        raise ContractViolation(f"Number of steps must be a positive integer, got {k}")

    vnorm = float(np.linalg.norm(v))
    if not np.isfinite(vnorm):
        raise ContractViolation("Starting vector has non-finite entries")
    if vnorm == 0.0:
        raise ContractViolation("Starting vector is zero")

    basis = np.empty((len(v), int(k) + 1))
    basis[:, 0] = v / vnorm

    return operator, basis, vnorm


def _orthogonalize(w, basis, trigger):
    """Classical Gram-Schmidt against ``basis`` with a conditional second pass."""
    before = np.linalg.norm(w)
    coefficients = basis.T @ w
    w -= basis @ coefficients

    after = np.linalg.norm(w)
    if after < trigger * before:
        correction = basis.T @ w
        w -= basis @ correction
        coefficients += correction
        after = np.linalg.norm(w)

    return w, coefficients, after


def lanczos(C, v, k, breakdown_rtol=None, reorth_trigger=None):
    """
    Lanczos procedure with full reorthogonalization for self-adjoint ``C``.

    Stops early when ``beta_{j+1} <= breakdown_rtol * (max|alpha| + 2 max beta)``
    (lucky breakdown: the Krylov space is invariant and quadrature on it is
    exact).

    :param C: self-adjoint operator (see :func:`spectra_count.sparse.as_operator`)
    :param v: nonzero starting vector
    :param k: maximal number of steps
    :returns: :class:`LanczosDecomposition`
    """

    if breakdown_rtol is None:
        breakdown_rtol = get_setting("breakdown_rtol")
    if reorth_trigger is None:
        reorth_trigger = get_setting("reorth_trigger")

    operator, basis, vnorm = _start(C, v, k)

    alphas, betas = [], []
    beta = 0.0
    breakdown = False

    for j in range(int(k)):
        w = np.array(operator.matvec(basis[:, j]), dtype=float).ravel()
        if j:
            w -= beta * basis[:, j - 1]

        alpha = float(basis[:, j] @ w)
        w -= alpha * basis[:, j]
        w, _, beta = _orthogonalize(w, basis[:, :j + 1], reorth_trigger)

        if not (np.isfinite(alpha) and np.isfinite(beta)):
            raise KrylovError(f"Non-finite value in Lanczos step {j + 1}", step=j + 1)

        alphas.append(alpha)
        betas.append(beta)

        norm_estimate = max(abs(a) for a in alphas) + 2.0 * max(betas)
        if beta <= breakdown_rtol * norm_estimate:
            logger.debug("Lanczos breakdown at step %d (beta=%.3e)", j + 1, beta)
            breakdown = True
            break

        basis[:, j + 1] = w / beta

    steps = len(alphas)
    basis = basis[:, :steps if breakdown else steps + 1]

    return LanczosDecomposition(alphas, betas, basis, breakdown, vnorm, matvecs=steps)


def arnoldi(C, v, k, breakdown_rtol=None, reorth_trigger=None):
    """
    Arnoldi procedure with modified Gram-Schmidt and a conditional second
    orthogonalization pass. Breakdown is declared when
    ``h_{j+1,j} <= breakdown_rtol * max ||C q_i||``.

    :param C: operator (see :func:`spectra_count.sparse.as_operator`)
    :param v: nonzero starting vector
    :param k: maximal number of steps
    :returns: :class:`ArnoldiDecomposition`
    """

    if breakdown_rtol is None:
        breakdown_rtol = get_setting("breakdown_rtol")
    if reorth_trigger is None:
        reorth_trigger = get_setting("reorth_trigger")

    operator, basis, vnorm = _start(C, v, k)

    k = int(k)
    hessenberg = np.zeros((k + 1, k))
    norm_estimate = 0.0
    breakdown = False
    steps = 0

    for j in range(k):
        w = np.array(operator.matvec(basis[:, j]), dtype=float).ravel()
        before = np.linalg.norm(w)
        norm_estimate = max(norm_estimate, before)

        for i in range(j + 1):
            h = basis[:, i] @ w
            hessenberg[i, j] += h
            w -= h * basis[:, i]

        after = np.linalg.norm(w)
        if after < reorth_trigger * before:
            for i in range(j + 1):
                h = basis[:, i] @ w
                hessenberg[i, j] += h
                w -= h * basis[:, i]
            after = np.linalg.norm(w)

        if not (np.all(np.isfinite(hessenberg[:j + 1, j])) and np.isfinite(after)):
            raise KrylovError(f"Non-finite value in Arnoldi step {j + 1}", step=j + 1)

        hessenberg[j + 1, j] = after
        steps = j + 1

        if after <= breakdown_rtol * norm_estimate:
            logger.debug("Arnoldi breakdown at step %d (h=%.3e)", j + 1, after)
            breakdown = True
            break

        basis[:, j + 1] = w / after

    basis = basis[:, :steps if breakdown else steps + 1]

    return ArnoldiDecomposition(hessenberg[:steps + 1, :steps], basis, breakdown, vnorm, matvecs=steps)


def krylov_poly_apply(dec, f_on_section, vnorm=None):
    """
    Evaluate ``||v|| Q_k f(T_k) e_1``, which equals ``p(C) v`` for the
    polynomial of degree ``k - 1`` interpolating ``f`` on the Ritz values.

    :param dec: :class:`LanczosDecomposition` or :class:`ArnoldiDecomposition`
    :param f_on_section: maps the dense ``k x k`` section to ``f`` of it
    :param vnorm: norm of the starting vector (taken from ``dec`` by default)
    """

    if vnorm is None:
        vnorm = dec.vnorm

    k = dec.steps_completed
    section = dec.section()
    values = np.asarray(f_on_section(section))

    if values.shape != (k, k):
        raise ContractViolation(f"Matrix function returned shape {values.shape}, expected {(k, k)}")

    return vnorm * (dec.basis[:, :k] @ values[:, 0])
