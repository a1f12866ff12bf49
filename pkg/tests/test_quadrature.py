from types import SimpleNamespace

import numpy as np
import pytest

from spectra_count import ContractViolation, apply_step_function, arnoldi_rule, ga_rule, gauss_rule
from spectra_count.krylov import arnoldi, lanczos
from spectra_count.quadrature import ArnoldiRule, GaussRule, StepValue, ga_tridiagonal
from testing_tools import diag_csr, moment_scale, random_symmetric, step_form, to_csr, with_spectrum


def rule_moment(rule, power):
    if isinstance(rule, GaussRule):
        return complex(np.sum(rule.weights * rule.nodes ** power))
    return complex(np.sum(rule.left_factors * rule.right_factors * rule.nodes ** power))


def test_gauss_rule_two_by_two():
    rule = gauss_rule(lanczos(diag_csr([-1, 1]), np.array([1.0, 1.0]), 2))

    assert np.allclose(rule.nodes, [-1, 1])
    assert np.allclose(rule.weights, [1, 1])
    assert rule.vnorm_sq == pytest.approx(2.0)
    assert apply_step_function(rule).value == pytest.approx(1.0)


def test_gauss_rule_exact_moments():
    rng = np.random.default_rng(0)
    n, k = 30, 4
    dense = random_symmetric(n, rng)
    v = rng.standard_normal(n)

    rule = gauss_rule(lanczos(to_csr(dense), v, k))

    assert np.sum(rule.weights) == pytest.approx(v @ v)
    for power in range(2 * k):
        exact = v @ np.linalg.matrix_power(dense, power) @ v
        assert abs(rule_moment(rule, power) - exact) <= 1e-9 * moment_scale(dense, v, power)


def test_ga_rule_exact_moments():
    rng = np.random.default_rng(1)
    n, k = 30, 4
    dense = random_symmetric(n, rng)
    v = rng.standard_normal(n)

    dec = lanczos(to_csr(dense), v, k)
    rule = ga_rule(dec)

    assert len(rule.nodes) == 2 * k - 1
    assert np.sum(rule.weights) == pytest.approx(v @ v)
    for power in range(2 * k + 1):
        exact = v @ np.linalg.matrix_power(dense, power) @ v
        assert abs(rule_moment(rule, power) - exact) <= 1e-9 * moment_scale(dense, v, power)


def test_gauss_rule_exact_on_few_eigenvalues():
    rng = np.random.default_rng(2)
    dense = with_spectrum([-2.0] * 5 + [1.0] * 7 + [3.0] * 8, rng)
    v = rng.standard_normal(20)

    dec = lanczos(to_csr((dense + dense.T) / 2), v, 10)
    rule = gauss_rule(dec)

    assert dec.breakdown
    assert dec.steps_completed == 3
    assert apply_step_function(rule).value == pytest.approx(step_form(dense, v), rel=1e-10)


def test_gauss_rule_scale_invariance():
    rng = np.random.default_rng(3)
    dense = random_symmetric(25, rng)
    v = rng.standard_normal(25)

    plain = apply_step_function(gauss_rule(lanczos(to_csr(dense), v, 6))).value
    scaled = apply_step_function(gauss_rule(lanczos(to_csr(7.5 * dense), 3.0 * v, 6))).value

    assert scaled == pytest.approx(9.0 * plain, rel=1e-9)


def test_ga_tridiagonal_layout():
    t = ga_tridiagonal([1.0, 2.0, 3.0], [4.0, 5.0, 6.0])

    assert np.array_equal(t.diag, [1, 2, 3, 2, 1])
    assert np.array_equal(t.offdiag, [4, 5, 6, 4])

    t = ga_tridiagonal([1.0], [2.0])
    assert np.array_equal(t.diag, [1])
    assert len(t.offdiag) == 0

    with pytest.raises(ContractViolation):
        ga_tridiagonal([1.0, 2.0], [3.0])


def test_ga_rule_falls_back_on_breakdown():
    dec = lanczos(diag_csr([-1, 1]), np.array([1.0, 1.0]), 5)
    rule = ga_rule(dec)

    assert dec.breakdown
    assert len(rule.nodes) == 2
    assert apply_step_function(rule).value == pytest.approx(1.0)


def test_arnoldi_rule_matches_gauss_on_symmetric():
    rng = np.random.default_rng(4)
    dense = random_symmetric(30, rng)
    v = rng.standard_normal(30)

    gauss = apply_step_function(gauss_rule(lanczos(to_csr(dense), v, 7)))
    general = apply_step_function(arnoldi_rule(arnoldi(to_csr(dense), v, 7)))

    assert general.value == pytest.approx(gauss.value, rel=1e-8)
    assert abs(general.imag) < 1e-8


def test_arnoldi_rule_single_step():
    v = np.array([1.0, 2.0, 2.0])
    rule = arnoldi_rule(arnoldi(np.diag([1.0, 2.0, 3.0]), v, 1))

    assert rule.vnorm_sq == pytest.approx(9.0)
    assert rule.nodes[0].real == pytest.approx((1 + 8 + 12) / 9)
    assert (rule.left_factors * rule.right_factors).sum().real == pytest.approx(9.0)


def test_arnoldi_rule_moments_nonsymmetric():
    rng = np.random.default_rng(5)
    n, k = 30, 5
    dense = rng.standard_normal((n, n)) / np.sqrt(n)
    v = rng.standard_normal(n)

    rule = arnoldi_rule(arnoldi(to_csr(dense, symmetric=False), v, k))

    assert rule_moment(rule, 0).real == pytest.approx(v @ v)
    for power in range(k):
        exact = v @ np.linalg.matrix_power(dense, power) @ v
        assert abs(rule_moment(rule, power) - exact) <= 1e-8 * moment_scale(dense, v, power)


def test_arnoldi_rule_preconditioned_symmetric_measure():
    rng = np.random.default_rng(6)
    n, k = 20, 20
    A = random_symmetric(n, rng)
    t = np.diag(rng.uniform(0.5, 2.0, size=n))
    v = rng.standard_normal(n)

    rule = arnoldi_rule(arnoldi(t @ A, v, k))
    step = apply_step_function(rule)

    # C = T A is similar to S = T^(1/2) A T^(1/2)
    half = np.sqrt(t)
    values, vectors = np.linalg.eigh(half @ A @ half)
    negative = vectors[:, values < 0]
    expected = float((half @ v) @ negative @ negative.T @ (v / np.diag(half)))

    assert step.value == pytest.approx(expected, rel=1e-6)
    assert abs(step.imag) < 1e-6


def test_apply_step_function():
    rule = GaussRule(np.array([-2.0, -0.5, 1.0]), np.array([0.25, 0.5, 2.0]), 2.75)
    assert apply_step_function(rule) == StepValue(0.75, False, 0.0)

    rule = GaussRule(np.array([0.0, 1.0]), np.array([1.0, 1.0]), 2.0)
    step = apply_step_function(rule)
    assert step.value == 0.0
    assert step.near_zero

    rule = ArnoldiRule(
        np.array([-1 + 1j, -1 - 1j, 2.0 + 0j]),
        np.array([0.5 + 0.5j, 0.5 - 0.5j, 1.0 + 0j]),
        np.array([1.0 + 0j, 1.0 + 0j, 1.0 + 0j]),
        2.0,
    )
    step = apply_step_function(rule)
    assert step.value == pytest.approx(1.0)
    assert step.imag == pytest.approx(0.0)
    assert not step.near_zero

    with pytest.raises(ContractViolation):
        apply_step_function(SimpleNamespace(nodes=np.array([1.0])))


def test_error_decreases_with_steps():
    rng = np.random.default_rng(7)
    n = 200
    values = np.concatenate([np.linspace(-10.0, -1.0, 60), np.linspace(1.0, 10.0, 140)])
    dense = with_spectrum(values, rng)
    dense = (dense + dense.T) / 2
    A = to_csr(dense)

    errors = {k: [] for k in (2, 4, 8, 16)}
    for _ in range(10):
        v = rng.standard_normal(n)
        exact = step_form(dense, v)
        for k in errors:
            value = apply_step_function(gauss_rule(lanczos(A, v, k))).value
            errors[k].append(abs(value - exact))

    means = [np.mean(errors[k]) for k in sorted(errors)]
    assert means[-1] < means[0]
    assert means[-1] < 0.1 * means[0]
