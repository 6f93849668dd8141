import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bernfilter.bernstein import BernCoeffs, design_coeffs, eval_filter, named_filter
from bernfilter.errors import FilterError, GraphError
from bernfilter.graph import grid_graph, laplacian_matvec, normalized_operator
from bernfilter.propagation import bernnet_apply, bernnet_apply_matrix, build_basis_cache, dense_operator
from bernfilter.spectral import eigendecompose, exact_filter_apply

from conftest import random_graph


def test_all_pass_is_identity(rng):
    op = normalized_operator(random_graph(30, 0.2, seed=1))
    x = rng.standard_normal(30)
    np.testing.assert_allclose(bernnet_apply(op, BernCoeffs(np.ones(11)), x), x, atol=1e-8)


@pytest.mark.parametrize("K", [1, 3, 10])
def test_linear_low_is_half_lazy_walk(K, rng):
    op = normalized_operator(random_graph(30, 0.2, seed=2))
    x = rng.standard_normal(30)
    z = bernnet_apply(op, design_coeffs(named_filter("linear_low"), K), x)
    np.testing.assert_allclose(z, x - 0.5 * laplacian_matvec(op, x), atol=1e-8)


def test_impulse_high_on_k2(k2):
    op = normalized_operator(k2)
    z = bernnet_apply(op, BernCoeffs([0.0, 0.0, 1.0]), [1.0, -1.0])
    np.testing.assert_allclose(z, [1.0, -1.0], atol=1e-14)


def test_matrix_matches_columns(rng):
    op = normalized_operator(random_graph(25, 0.2, seed=3))
    c = BernCoeffs(rng.uniform(0, 1, 6))
    X = rng.standard_normal((25, 4))
    Z = bernnet_apply_matrix(op, c, X)
    for j in range(4):
        np.testing.assert_allclose(Z[:, j], bernnet_apply(op, c, X[:, j]), rtol=0, atol=1e-14)
    perm = [2, 0, 3, 1]
    np.testing.assert_array_equal(bernnet_apply_matrix(op, c, X[:, perm]), Z[:, perm])


def test_matrix_all_pass(rng):
    op = normalized_operator(random_graph(15, 0.3, seed=4))
    X = rng.standard_normal((15, 3))
    np.testing.assert_allclose(bernnet_apply_matrix(op, BernCoeffs(np.ones(8)), X), X, atol=1e-8)


def test_dense_operator_symmetric(rng):
    op = normalized_operator(random_graph(20, 0.25, seed=5))
    M = dense_operator(op, BernCoeffs(rng.uniform(0, 1, 11)))
    np.testing.assert_allclose(M, M.T, atol=1e-9)


def test_input_checks(k2):
    op = normalized_operator(k2)
    with pytest.raises(GraphError):
        bernnet_apply(op, BernCoeffs([1.0]), np.ones(3))
    with pytest.raises(FilterError):
        bernnet_apply(op, BernCoeffs([1.0]), [np.inf, 0.0])
    with pytest.raises(GraphError):
        bernnet_apply_matrix(op, BernCoeffs([1.0]), np.ones(2))
    with pytest.raises(FilterError):
        build_basis_cache(op, 65, np.ones(2))


def test_cache_order_zero(rng):
    op = normalized_operator(random_graph(10, 0.3, seed=6))
    x = rng.standard_normal(10)
    cache = build_basis_cache(op, 0, x)
    assert len(cache) == 1
    np.testing.assert_array_equal(cache[0], x)


def test_cache_partition_and_psd(rng):
    g = random_graph(30, 0.2, seed=7)
    op = normalized_operator(g)
    x = rng.standard_normal(30)
    cache = build_basis_cache(op, 10, x)
    np.testing.assert_allclose(cache.terms.sum(axis=0), x, atol=1e-8)
    for k in range(11):
        assert cache[k] @ x >= -1e-9


def test_basis_terms_symmetric(rng):
    op = normalized_operator(random_graph(25, 0.2, seed=8))
    x, y = rng.standard_normal(25), rng.standard_normal(25)
    cx, cy = build_basis_cache(op, 8, x), build_basis_cache(op, 8, y)
    for k in range(9):
        assert abs(cx[k] @ y - x @ cy[k]) <= 1e-9


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 100), p=st.floats(0.03, 0.4), K=st.integers(0, 16), seed=st.integers(0, 10_000))
def test_matches_spectral_oracle(n, p, K, seed):
    g = random_graph(n, p, seed)
    op = normalized_operator(g)
    rng = np.random.default_rng(seed)
    c = BernCoeffs(rng.uniform(0, 1, K + 1))
    x = rng.standard_normal(n)
    dec = eigendecompose(op)
    ref = exact_filter_apply(dec, lambda lam: eval_filter(c, lam), x)
    z = bernnet_apply(op, c, x)
    assert np.linalg.norm(z - ref) <= 1e-8 * np.linalg.norm(ref) + 1e-12


def test_converges_to_target_filter():
    g = grid_graph(3, 3)
    op = normalized_operator(g)
    dec = eigendecompose(op)
    x = np.random.default_rng(0).standard_normal(9)
    h = named_filter("exp_low")
    ref = exact_filter_apply(dec, h, x)
    err = [np.linalg.norm(bernnet_apply(op, design_coeffs(h, K), x) - ref) / np.linalg.norm(x) for K in (4, 10, 40)]
    assert err[2] < err[1] < err[0]


def test_linear_in_theta(rng):
    op = normalized_operator(random_graph(30, 0.2, seed=9))
    x = rng.standard_normal(30)
    a, b = rng.uniform(0, 1, 11), rng.uniform(0, 1, 11)
    za, zb = bernnet_apply(op, BernCoeffs(a), x), bernnet_apply(op, BernCoeffs(b), x)
    np.testing.assert_allclose(bernnet_apply(op, BernCoeffs(a + b), x), za + zb, atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), K=st.integers(0, 20))
def test_contractive_for_unit_box_coefficients(seed, K):
    rng = np.random.default_rng(seed)
    op = normalized_operator(random_graph(40, 0.15, seed))
    x = rng.standard_normal(40)
    z = bernnet_apply(op, BernCoeffs(rng.uniform(0, 1, K + 1)), x)
    assert np.linalg.norm(z) <= np.linalg.norm(x) * (1 + 1e-9)


@pytest.mark.parametrize("K", [30, 48, 64])
def test_high_orders_stay_accurate(K, rng):
    op = normalized_operator(random_graph(60, 0.1, seed=3))
    x = rng.standard_normal(60)
    np.testing.assert_allclose(bernnet_apply(op, BernCoeffs(np.ones(K + 1)), x), x, atol=1e-12)
    c = BernCoeffs(rng.uniform(0, 1, K + 1))
    ref = exact_filter_apply(eigendecompose(op), lambda lam: eval_filter(c, lam), x)
    assert np.linalg.norm(bernnet_apply(op, c, x) - ref) <= 1e-11 * np.linalg.norm(ref)
