import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bernfilter.errors import GraphError
from bernfilter.graph import build_graph, grid_graph, laplacian_matvec, normalized_operator

from conftest import dense_laplacian, random_graph


def test_single_edge():
    g = build_graph([(0, 1)], 2)
    np.testing.assert_array_equal(g.degrees, [1, 1])
    assert g.num_edges == 1


def test_duplicates_and_orientations_collapse():
    g = build_graph([(0, 1), (1, 0), (0, 1)], 2)
    ref = build_graph([(0, 1)], 2)
    np.testing.assert_array_equal(g.col_indices, ref.col_indices)
    np.testing.assert_array_equal(g.row_offsets, ref.row_offsets)


def test_cycle_degrees(cycle4):
    np.testing.assert_array_equal(cycle4.degrees, [2, 2, 2, 2])


def test_self_loops_dropped():
    g = build_graph([(0, 0), (0, 1), (2, 2)], 3)
    np.testing.assert_array_equal(g.degrees, [1, 1, 0])


@pytest.mark.parametrize("edges,n", [([(0, 2)], 2), ([(-1, 0)], 2), ([], 0)])
def test_build_errors(edges, n):
    with pytest.raises(GraphError):
        build_graph(edges, n)


def test_csr_invariants():
    g = random_graph(30, 0.2, seed=3)
    np.testing.assert_array_equal(np.diff(g.row_offsets), g.degrees)
    A = g.adjacency().toarray()
    np.testing.assert_array_equal(A, A.T)
    assert np.all(np.diag(A) == 0)
    assert A.max() <= 1


def test_grid_small_cases(k2, cycle4):
    g12 = grid_graph(1, 2)
    np.testing.assert_array_equal(g12.adjacency().toarray(), k2.adjacency().toarray())
    g22 = grid_graph(2, 2)
    # the 2x2 grid is a 4-cycle up to relabeling 0-1-3-2
    perm = [0, 1, 3, 2]
    A = g22.adjacency().toarray()[np.ix_(perm, perm)]
    np.testing.assert_array_equal(A, cycle4.adjacency().toarray())


def test_grid_3x3_by_enumeration():
    g = grid_graph(3, 3)
    expected = set()
    for r in range(3):
        for c in range(3):
            for dr, dc in ((0, 1), (1, 0)):
                if r + dr < 3 and c + dc < 3:
                    expected.add((r * 3 + c, (r + dr) * 3 + c + dc))
    assert g.num_edges == len(expected) == 12
    assert {tuple(e) for e in g.edges().tolist()} == expected
    assert g.degrees[0] == 2 and g.degrees[4] == 4


def test_grid_rejects_zero():
    with pytest.raises(GraphError):
        grid_graph(0, 3)


def test_laplacian_matvec_k2(k2):
    op = normalized_operator(k2)
    np.testing.assert_allclose(laplacian_matvec(op, [1.0, -1.0]), [2.0, -2.0], atol=1e-15)
    np.testing.assert_allclose(laplacian_matvec(op, [1.0, 1.0]), [0.0, 0.0], atol=1e-15)


def test_laplacian_matvec_cycle(cycle4):
    L = dense_laplacian(cycle4)
    e0 = np.eye(4)[0]
    np.testing.assert_allclose(L @ e0, [1, -0.5, 0, -0.5], atol=1e-15)
    np.testing.assert_allclose(laplacian_matvec(normalized_operator(cycle4), e0), L @ e0, atol=1e-15)


def test_isolated_node_identity():
    g = build_graph([(0, 1)], 3)
    op = normalized_operator(g)
    out = laplacian_matvec(op, [0.0, 0.0, 5.0])
    np.testing.assert_allclose(out, [0.0, 0.0, 5.0])


def test_dimension_mismatch(k2):
    with pytest.raises(GraphError):
        laplacian_matvec(normalized_operator(k2), np.ones(3))


def test_adjacency_mode_required():
    op = normalized_operator(build_graph([(0, 1)], 2), "adjacency")
    with pytest.raises(GraphError):
        laplacian_matvec(op, np.ones(2))


def test_L_equals_I_minus_P():
    g = random_graph(25, 0.15, seed=8)
    L = normalized_operator(g).to_dense()
    P = normalized_operator(g, "adjacency").to_dense()
    np.testing.assert_allclose(L, np.eye(g.n) - P, atol=1e-15)


def test_sqrt_degree_vector_in_kernel():
    g = random_graph(40, 0.2, seed=1)
    v = np.sqrt(g.degrees.astype(float))
    np.testing.assert_allclose(laplacian_matvec(normalized_operator(g), v), 0.0, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 100), p=st.floats(0.02, 0.5), seed=st.integers(0, 10_000))
def test_sparse_matches_dense_and_is_psd_symmetric(n, p, seed):
    g = random_graph(n, p, seed)
    op = normalized_operator(g)
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal(n), rng.standard_normal(n)
    Lx = laplacian_matvec(op, x)
    np.testing.assert_allclose(Lx, dense_laplacian(g) @ x, atol=1e-12, rtol=0)
    assert x @ Lx >= -1e-9 * (x @ x)
    assert abs(Lx @ y - x @ laplacian_matvec(op, y)) <= 1e-10


def test_spectrum_in_range():
    g = random_graph(60, 0.1, seed=4)
    w = np.linalg.eigvalsh(dense_laplacian(g))
    assert w.min() >= -1e-9 and w.max() <= 2 + 1e-9
