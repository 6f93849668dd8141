import math

import numpy as np
import pytest

from bernfilter.bernstein import named_filter
from bernfilter.errors import FilterError, OracleCapError
from bernfilter.graph import build_graph, grid_graph, laplacian_matvec, normalized_operator
from bernfilter.spectral import (
    eigendecompose,
    energy_filter,
    energy_solution,
    exact_filter_apply,
    heat_suffix_sum,
    jacobi_eigh,
    ppr_suffix_sum,
)

from conftest import dense_laplacian, random_graph


def check_decomposition(dec, L):
    U, w = dec.eigenvectors, dec.eigenvalues
    assert np.abs(U @ U.T - np.eye(len(w))).max() <= 1e-8
    assert np.abs(L @ U - U * w).max() <= 1e-8
    assert w.min() >= -1e-8 and w.max() <= 2 + 1e-8
    assert np.all(np.diff(w) >= 0)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 40])
def test_jacobi_matches_lapack_on_random_symmetric(n):
    rng = np.random.default_rng(n)
    A = rng.standard_normal((n, n))
    A = A + A.T
    w, V = jacobi_eigh(A)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(A), atol=1e-11)
    np.testing.assert_allclose(V @ V.T, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(A @ V, V * w, atol=1e-10)


def test_jacobi_rejects_asymmetric():
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_k2_spectrum(k2):
    dec = eigendecompose(normalized_operator(k2))
    np.testing.assert_allclose(dec.eigenvalues, [0.0, 2.0], atol=1e-14)


def test_cycle4_spectrum_from_characteristic_polynomial(cycle4):
    # roots of det(lam I - L) for the 4-cycle, computed from the dense matrix built by hand
    roots = np.sort(np.roots(np.poly(dense_laplacian(cycle4))).real)
    np.testing.assert_allclose(roots, [0, 1, 1, 2], atol=1e-7)
    dec = eigendecompose(normalized_operator(cycle4))
    np.testing.assert_allclose(dec.eigenvalues, [0, 1, 1, 2], atol=1e-12)


def test_grid_min_eigenvalue_zero():
    dec = eigendecompose(normalized_operator(grid_graph(3, 3)))
    assert dec.eigenvalues[0] == pytest.approx(0.0, abs=1e-12)
    assert dec.eigenvalues[1] > 1e-3


@pytest.mark.parametrize("method", ["jacobi", "lapack"])
def test_decomposition_invariants(method):
    g = random_graph(80, 0.08, seed=11)
    dec = eigendecompose(normalized_operator(g), method=method)
    check_decomposition(dec, dense_laplacian(g))


def test_methods_agree():
    op = normalized_operator(random_graph(50, 0.1, seed=2))
    a = eigendecompose(op, method="jacobi")
    b = eigendecompose(op, method="lapack")
    np.testing.assert_allclose(a.eigenvalues, b.eigenvalues, atol=1e-10)


def test_oracle_cap():
    g = build_graph([(0, 1)], 2001)
    with pytest.raises(OracleCapError):
        eigendecompose(normalized_operator(g))


def test_all_pass_identity(rng):
    g = random_graph(30, 0.2, seed=5)
    dec = eigendecompose(normalized_operator(g))
    x = rng.standard_normal(30)
    np.testing.assert_allclose(exact_filter_apply(dec, named_filter("all_pass"), x), x, atol=1e-8)


def test_linear_high_on_k2(k2):
    dec = eigendecompose(normalized_operator(k2))
    np.testing.assert_allclose(exact_filter_apply(dec, named_filter("linear_high"), [1.0, -1.0]),
                               [1.0, -1.0], atol=1e-12)


def test_exp_low_on_cycle_closed_form(cycle4):
    # eigenpairs of the 4-cycle: (1,1,1,1)/2 at 0; (1,0,-1,0)/sqrt2, (0,1,0,-1)/sqrt2 at 1; (1,-1,1,-1)/2 at 2
    h = named_filter("exp_low")
    h0, h1, h2 = h(0.0), h(1.0), h(2.0)
    expected = (h0 / 4 * np.ones(4) + h1 / 2 * np.array([1, 0, -1, 0])
                + h2 / 4 * np.array([1, -1, 1, -1]))
    dec = eigendecompose(normalized_operator(cycle4))
    np.testing.assert_allclose(exact_filter_apply(dec, h, np.eye(4)[0]), expected, atol=1e-12)


def test_linear_response_equals_matvec(rng):
    g = random_graph(40, 0.15, seed=6)
    op = normalized_operator(g)
    dec = eigendecompose(op)
    x = rng.standard_normal(40)
    np.testing.assert_allclose(exact_filter_apply(dec, lambda lam: lam, x), laplacian_matvec(op, x), atol=1e-8)


def test_functional_calculus_composes(rng):
    g = random_graph(35, 0.15, seed=7)
    dec = eigendecompose(normalized_operator(g))
    x = rng.standard_normal(35)
    h1, h2 = named_filter("exp_band"), named_filter("comb")
    twice = exact_filter_apply(dec, h2, exact_filter_apply(dec, h1, x))
    once = exact_filter_apply(dec, lambda lam: h1(lam) * h2(lam), x)
    np.testing.assert_allclose(twice, once, atol=1e-7)


def test_exact_filter_matrix_input(rng):
    g = random_graph(20, 0.3, seed=1)
    dec = eigendecompose(normalized_operator(g))
    X = rng.standard_normal((20, 3))
    h = named_filter("exp_high")
    out = exact_filter_apply(dec, h, X)
    for j in range(3):
        np.testing.assert_allclose(out[:, j], exact_filter_apply(dec, h, X[:, j]), atol=1e-14)


def test_energy_zero_gamma_is_identity(rng):
    dec = eigendecompose(normalized_operator(random_graph(15, 0.3, seed=3)))
    x = rng.standard_normal(15)
    for alpha in (0.1, 0.5, 1.0):
        np.testing.assert_allclose(energy_solution(dec, lambda lam: np.zeros_like(lam), alpha, x), x, atol=1e-12)


def test_energy_laplacian_on_k2(k2):
    # alpha (alpha I + (1 - alpha) L)^{-1} x with alpha = 1/2 is (I + L)^{-1} x; (I + L)^{-1} = [[2, 1], [1, 2]] / 3
    dec = eigendecompose(normalized_operator(k2))
    z = energy_solution(dec, lambda lam: lam, 0.5, [0.0, 1.0])
    np.testing.assert_allclose(z, [1 / 3, 2 / 3], atol=1e-14)


def test_energy_solution_minimizes_objective(rng):
    g = random_graph(20, 0.25, seed=9)
    L = dense_laplacian(g)
    dec = eigendecompose(normalized_operator(g))
    x = rng.standard_normal(20)
    alpha = 0.3
    z = energy_solution(dec, lambda lam: lam, alpha, x)
    np.testing.assert_allclose(z, np.linalg.solve(alpha * np.eye(20) + (1 - alpha) * L, alpha * x), atol=1e-10)


def test_heat_energy_gives_heat_kernel(rng):
    dec = eigendecompose(normalized_operator(random_graph(25, 0.2, seed=10)))
    x = rng.standard_normal(25)
    t = 1.7
    z = energy_solution(dec, lambda lam: np.exp(t * lam) - 1, 0.5, x)
    np.testing.assert_allclose(z, exact_filter_apply(dec, lambda lam: np.exp(-t * lam), x), atol=1e-12)
    resp = energy_filter(lambda lam: np.exp(t * lam) - 1, 0.5)(np.linspace(0, 2, 5))
    np.testing.assert_allclose(resp, np.exp(-t * np.linspace(0, 2, 5)), atol=1e-14)


def test_energy_rejects_indefinite(k2):
    dec = eigendecompose(normalized_operator(k2))
    with pytest.raises(FilterError, match="positive semidefinite"):
        energy_solution(dec, lambda lam: 1 - lam, 0.5, [1.0, 0.0])
    with pytest.raises(FilterError):
        energy_solution(dec, lambda lam: lam, 0.0, [1.0, 0.0])


def test_ppr_head(rng):
    op = normalized_operator(random_graph(10, 0.3, seed=4))
    x = rng.standard_normal(10)
    alpha = 1 - 1e-9
    np.testing.assert_allclose(ppr_suffix_sum(op, alpha, 0, x), alpha * x)


@pytest.mark.parametrize("seed", range(3))
def test_ppr_tail_bound(seed):
    g = random_graph(30, 0.2, seed=seed)
    op = normalized_operator(g)
    dec = eigendecompose(op)
    x = np.random.default_rng(seed).standard_normal(30)
    alpha, K = 0.1, 64
    diff = np.abs(ppr_suffix_sum(op, alpha, K, x) - energy_solution(dec, lambda lam: lam, alpha, x)).max()
    assert diff <= (1 - alpha) ** (K + 1) / alpha * np.linalg.norm(x)


@pytest.mark.parametrize("seed", range(3))
def test_heat_series(seed):
    g = random_graph(30, 0.2, seed=seed)
    op = normalized_operator(g)
    dec = eigendecompose(op)
    x = np.random.default_rng(seed).standard_normal(30)
    z = heat_suffix_sum(op, 1.0, 64, x)
    ref = energy_solution(dec, lambda lam: np.exp(lam) - 1, 0.5, x)
    np.testing.assert_allclose(z, ref, atol=1e-8)


def test_series_parameter_checks(k2):
    op = normalized_operator(k2)
    with pytest.raises(FilterError):
        ppr_suffix_sum(op, 1.0, 3, [1.0, 0.0])
    with pytest.raises(FilterError):
        heat_suffix_sum(op, 0.0, 3, [1.0, 0.0])
    with pytest.raises(FilterError):
        heat_suffix_sum(op, 1.0, -1, [1.0, 0.0])


def test_heat_weights_sum():
    weights = [math.exp(-2.0) * 2.0**k / math.factorial(k) for k in range(65)]
    assert sum(weights) == pytest.approx(1.0, abs=1e-15)
