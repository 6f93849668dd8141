"""Undirected graphs in compressed adjacency form and their normalized operators.

The symmetric normalized Laplacian ``L = I - D^{-1/2} A D^{-1/2}`` and the
normalized adjacency ``P = I - L`` are exposed as sparse operators. Isolated
nodes get a zero row/column in ``P``, so ``L`` acts as the identity on them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np
import scipy.sparse as sp

from .errors import GraphError

Mode = Literal["laplacian", "adjacency"]


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph stored as CSR adjacency.

    Attributes
    ----------
    n : int
        Number of nodes.
    row_offsets : ndarray of int64, shape (n + 1,)
    col_indices : ndarray of int64
        Neighbors of node ``u`` are ``col_indices[row_offsets[u]:row_offsets[u+1]]``,
        sorted ascending.
    degrees : ndarray of int64, shape (n,)
    """

    n: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    degrees: np.ndarray

    @property
    def num_edges(self) -> int:
        """Number of undirected edges."""
        return int(self.col_indices.size // 2)

    def neighbors(self, u: int) -> np.ndarray:
        return self.col_indices[self.row_offsets[u]:self.row_offsets[u + 1]]

    def edges(self) -> np.ndarray:
        """Undirected edges as an (m, 2) array with ``u < v``."""
        rows = np.repeat(np.arange(self.n), self.degrees)
        keep = rows < self.col_indices
        return np.column_stack([rows[keep], self.col_indices[keep]])

    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(self.col_indices.size)
        return sp.csr_matrix((data, self.col_indices, self.row_offsets), shape=(self.n, self.n))


def build_graph(edge_list: Iterable[tuple[int, int]] | np.ndarray, n: int) -> Graph:
    """Build a symmetric, deduplicated, self-loop-free graph.

    Either orientation of an edge may appear in ``edge_list``, any number of
    times. Self-loops are dropped silently.
    """
    n = int(n)
    if n <= 0:
        raise GraphError(f"node count must be positive, got {n}")
    edges = np.asarray(list(edge_list) if not isinstance(edge_list, np.ndarray) else edge_list,
                       dtype=np.int64)
    if edges.size == 0:
        edges = edges.reshape(0, 2)
    if edges.ndim != 2 or edges.shape[1] != 2:
        raise GraphError(f"edge list must have shape (m, 2), got {edges.shape}")
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        bad = edges[(edges < 0).any(axis=1) | (edges >= n).any(axis=1)][0]
        raise GraphError(f"edge ({bad[0]}, {bad[1]}) has an index outside [0, {n})")

    edges = edges[edges[:, 0] != edges[:, 1]]
    both = np.concatenate([edges, edges[:, ::-1]])
    keys = np.unique(both[:, 0] * n + both[:, 1])
    rows, cols = np.divmod(keys, n)
    degrees = np.bincount(rows, minlength=n).astype(np.int64)
    row_offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degrees, out=row_offsets[1:])
    return Graph(n=n, row_offsets=row_offsets, col_indices=cols.astype(np.int64), degrees=degrees)


def grid_graph(height: int, width: int) -> Graph:
    """4-neighborhood grid; node ``(r, c)`` has index ``r * width + c``."""
    if height < 1 or width < 1:
        raise GraphError(f"grid dimensions must be positive, got {height}x{width}")
    idx = np.arange(height * width).reshape(height, width)
    horizontal = np.column_stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    vertical = np.column_stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    return build_graph(np.concatenate([horizontal, vertical]), height * width)


@dataclass(frozen=True, eq=False)
class NormalizedOperator:
    """``L`` or ``P`` for a graph, applied through a sparse matrix.

    ``scale[u] = degrees[u] ** -0.5`` (0 for isolated nodes).
    """

    graph: Graph
    scale: np.ndarray
    mode: Mode
    matrix: sp.csr_matrix = field(repr=False)

    @property
    def n(self) -> int:
        return self.graph.n

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Apply the operator to a vector or to each column of an (n, d) matrix."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.n or x.ndim not in (1, 2):
            raise GraphError(f"operand has shape {x.shape}, expected ({self.n},) or ({self.n}, d)")
        return self.matrix @ x

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def with_mode(self, mode: Mode) -> "NormalizedOperator":
        if mode == self.mode:
            return self
        return normalized_operator(self.graph, mode)


def normalized_operator(graph: Graph, mode: Mode = "laplacian") -> NormalizedOperator:
    if mode not in ("laplacian", "adjacency"):
        raise GraphError(f"unknown operator mode {mode!r}")
    deg = graph.degrees.astype(np.float64)
    scale = np.zeros(graph.n)
    np.divide(1.0, np.sqrt(deg), out=scale, where=deg > 0)
    rows = np.repeat(np.arange(graph.n), graph.degrees)
    weights = scale[rows] * scale[graph.col_indices]
    P = sp.csr_matrix((weights, graph.col_indices, graph.row_offsets), shape=(graph.n, graph.n))
    if mode == "adjacency":
        matrix = P
    else:
        matrix = (sp.identity(graph.n, format="csr") - P).tocsr()
        matrix.sort_indices()
    return NormalizedOperator(graph=graph, scale=scale, mode=mode, matrix=matrix)


def laplacian_matvec(op: NormalizedOperator, x: np.ndarray) -> np.ndarray:
    """Return ``L x = x - D^{-1/2} A D^{-1/2} x``."""
    if op.mode != "laplacian":
        raise GraphError("laplacian_matvec requires an operator in laplacian mode")
    return op.matvec(x)
