"""Smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import afom


def test_entropy_and_bregman():
    assert afom.entropy_value(np.array([0.25, 0.25, 0.25, 0.25])) == pytest.approx(0.0, abs=1e-14)
    assert afom.entropy_value(np.array([0.25, 0.75])) == pytest.approx(0.13081203594113697)
    assert afom.bregman_distance(
        np.array([0.5, 0.5]), np.array([0.25, 0.75])
    ) == pytest.approx(0.13081203594113697)
    with pytest.raises(ValueError):
        afom.bregman_distance(np.array([1.0, 0.0]), np.array([0.5, 0.5]))


def test_prox_map():
    z = np.array([0.5, 0.5])
    s = np.array([math.log(2.0), 0.0])
    x = afom.prox_map(z, s)
    assert x == pytest.approx([1.0 / 3.0, 2.0 / 3.0])
    assert afom.dgf_center(4) == pytest.approx([0.25] * 4)


def test_iteration_budgets_match_reference_values():
    assert afom.worst_case_iterations(0.002, 100, 100, 0.0) == 9210
    assert afom.worst_case_iterations(0.002, 100, 100, 3.0) == 18420
    assert afom.worst_case_iterations(0.002, 100, 800, 3.0) == 22193


def test_formulas():
    assert afom.theoretical_bound(0, "nonadaptive", 1.0, math.log(2.0)) == pytest.approx(
        2.0 * math.log(2.0)
    )
    assert afom.mu_aggressive(19, 1.0, 1.0, 1.0) == pytest.approx(1.0)
    assert afom.mu_hybrid(1, 0.0, 1.0, 1.0, 1.0) == pytest.approx(1.0)
    assert afom.lipschitz_of_smoothed(0.5, 1.0) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        afom.theoretical_bound(1, "bogus", 1.0, 1.0)


def test_spectral_ops():
    a = np.diag([1.0, 0.0])
    assert afom.smoothed_lambda_max(a, 1.0) == pytest.approx(
        math.log(math.e + 1.0) - math.log(2.0)
    )
    y = afom.density_maximizer(a, 1.0)
    assert y[0, 0] == pytest.approx(math.e / (math.e + 1.0))
    assert np.trace(y) == pytest.approx(1.0)
    assert afom.exact_lambda_max(np.diag([1.0, 2.0, 3.0])) == pytest.approx(3.0)

    rng = np.random.default_rng(0)
    sym = rng.standard_normal((30, 30))
    sym = 0.5 * (sym + sym.T)
    exact = np.abs(np.linalg.eigvalsh(sym)).max()
    assert afom.power_method_norm(sym, 1e-4, 1000, 7) == pytest.approx(exact, rel=1e-3)


def test_instance_roundtrip(tmp_path):
    instance = afom.generate_instance(4, 10, 0.2, 42)
    assert instance.m == 4 and instance.n == 10
    assert instance.nnz_full == 20  # ceil(0.2 * 100)
    assert instance.l_prime > 0

    path = str(tmp_path / "instance.txt")
    instance.save(path)
    loaded = afom.load_instance(path)
    assert loaded.l_prime == instance.l_prime
    assert loaded.nnz_full == instance.nnz_full

    x = np.full(4, 0.25)
    np.testing.assert_allclose(loaded.assemble(x), instance.assemble(x))

    grad = instance.gradient(x, mu=0.1)
    assert grad.shape == (4,)


def test_solve_small_instance():
    instance = afom.generate_instance(5, 12, 0.2, 3)
    result = afom.solve(instance, eps=0.002, strategy="hybrid", alpha=3.0, kappa=1e-12)
    assert result.converged
    assert result.final_gap <= 0.002 * instance.l_prime
    assert result.iterations <= result.iterations_theory
    assert len(result.trace_t) == result.iterations + 1

    again = afom.solve(instance, eps=0.002, strategy="hybrid", alpha=3.0, kappa=1e-12)
    assert again.iterations == result.iterations
    assert again.final_gap == result.final_gap
    np.testing.assert_array_equal(np.array(again.trace_l), np.array(result.trace_l))


def test_solve_nonadaptive_beta_stays_zero():
    instance = afom.generate_instance(4, 8, 0.3, 1)
    result = afom.solve(instance, strategy="nonadaptive")
    assert result.converged
    assert all(b == 0.0 for b in result.trace_beta)
