"""
Quadrature rules for ``v^T h(C) v`` built from Krylov decompositions, where
``h`` is the step function equal to one on the negative half line (on the
open left half plane for the Arnoldi rule).

The underlying measure has jumps ``|u_i^T v|**2`` at the distinct eigenvalues
``mu_1 < ... < mu_p`` of ``C`` and total mass ``sum_j |u_j^T v|**2 = ||v||**2``
to the right of ``mu_p``.
"""

from collections import namedtuple

import numpy as np

from .dense import TridiagonalSym, hessenberg_eig, tridiag_eig
from .exceptions import ContractViolation
from .logger import logger
from .settings import get_setting


GaussRule = namedtuple("GaussRule", ("nodes", "weights", "vnorm_sq"))

ArnoldiRule = namedtuple("ArnoldiRule", ("nodes", "left_factors", "right_factors", "vnorm_sq"))

StepValue = namedtuple("StepValue", ("value", "near_zero", "imag"))


def _rule_from_tridiagonal(tridiagonal, vnorm_sq):
    pairs = tridiag_eig(tridiagonal)
    weights = vnorm_sq * pairs.vectors[0, :] ** 2
    return GaussRule(pairs.values, weights, vnorm_sq)


def gauss_rule(dec):
    """
    Gauss rule: nodes are the eigenvalues of ``J_k``, weights are
    ``||v||**2`` times squared first components of its unit eigenvectors.

    :param dec: :class:`spectra_count.krylov.LanczosDecomposition`
    :rtype: GaussRule
    """

    if dec.steps_completed < 1:
        raise ContractViolation("Decomposition has no completed steps")

    return _rule_from_tridiagonal(dec.tridiagonal, dec.vnorm ** 2)


def ga_tridiagonal(alphas, betas):
    """
    Reverse extension of ``J_{k+1,k}`` into the ``(2k-1) x (2k-1)`` matrix
    ``tridiag{(a_1..a_k, a_{k-1}..a_1), (b_2..b_k, b_{k+1}, b_{k-1}..b_2)}``.
    ``betas`` holds ``b_2 .. b_{k+1}``.
    """

    alphas = np.asarray(alphas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    k = len(alphas)

    if len(betas) != k:
        raise ContractViolation("Generalized averaged rule needs beta_{k+1}")

    diag = np.concatenate([alphas, alphas[:-1][::-1]])
    offdiag = np.concatenate([betas, betas[:k - 2][::-1]]) if k > 1 else np.empty(0)

    return TridiagonalSym.new(diag, offdiag)


def ga_rule(dec):
    """
    Generalized averaged Gauss rule with ``2k - 1`` nodes, exact for
    polynomials of degree ``2k``. A decomposition that broke down has no
    usable ``beta_{k+1}``, so the Gauss rule is returned instead (it is exact
    on the invariant Krylov space anyway).

    :param dec: :class:`spectra_count.krylov.LanczosDecomposition`
    :rtype: GaussRule
    """

    if dec.steps_completed < 1:
        raise ContractViolation("Decomposition has no completed steps")

    if dec.breakdown:
        logger.debug("Breakdown at step %d, falling back to the Gauss rule", dec.steps_completed)
        return gauss_rule(dec)

    return _rule_from_tridiagonal(ga_tridiagonal(dec.alphas, dec.betas), dec.vnorm ** 2)


def arnoldi_rule(dec):
    """
    Arnoldi rule: nodes are eigenvalues of ``H_k``, left factors
    ``||v||**2 z_i(1)`` and right factors the first column of ``Z^-1``.

    :param dec: :class:`spectra_count.krylov.ArnoldiDecomposition`
    :rtype: ArnoldiRule
    """

    if dec.steps_completed < 1:
        raise ContractViolation("Decomposition has no completed steps")

    pairs = hessenberg_eig(dec.hessenberg)
    vnorm_sq = dec.vnorm ** 2

    return ArnoldiRule(
        pairs.values,
        vnorm_sq * pairs.vectors[0, :],
        pairs.inverse_first_column,
        vnorm_sq,
    )


def apply_step_function(rule, near_zero_rtol=None):
    """
    Integrate the step function with the rule. Nodes are classified by the
    strict test ``theta < 0`` (``Re theta < 0`` for Arnoldi); nodes within
    ``near_zero_rtol * max|theta|`` of zero only set the ``near_zero`` flag.

    :param rule: :class:`GaussRule` or :class:`ArnoldiRule`
    :returns: :class:`StepValue` with real ``value``, ``near_zero`` flag and
        the discarded imaginary part
    """

    if near_zero_rtol is None:
        near_zero_rtol = get_setting("near_zero_rtol")

    nodes = np.asarray(rule.nodes)
    scale = float(np.max(np.abs(nodes))) if len(nodes) else 0.0
    near_zero = bool(np.any(np.abs(nodes) <= near_zero_rtol * scale))

    if isinstance(rule, GaussRule):
        value = float(np.sum(rule.weights[nodes < 0]))
        return StepValue(value, near_zero, 0.0)

    if isinstance(rule, ArnoldiRule):
        negative = nodes.real < 0
        total = complex(np.sum(rule.left_factors[negative] * rule.right_factors[negative]))
        return StepValue(total.real, near_zero, total.imag)

    raise ContractViolation(f"Unknown quadrature rule: {type(rule).__name__}")
