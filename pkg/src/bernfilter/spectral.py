"""Dense spectral oracle for small graphs.

Exact filtering ``h(L) x = U diag(h(lam)) U^T x`` plus the closed-form
optima of the regularized smoothing objective

    min_z (1 - alpha) z^T gamma(L) z + alpha ||z - x||^2,

whose solution is the spectral filter ``alpha / (alpha + (1 - alpha) gamma(lam))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .errors import FilterError, GraphError, OracleCapError
from .graph import NormalizedOperator

ORACLE_MAX_NODES = 2000
# Above this size the round-robin Jacobi sweep gets slow in numpy; fall back to LAPACK.
JACOBI_AUTO_MAX_NODES = 200


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (ascending, clamped to [0, 2]) and orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.T


def _round_robin(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings of ``m`` (even) players such that every pair meets exactly once."""
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p = np.array(players[: m // 2])
        q = np.array(players[m // 2:][::-1])
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(A: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi eigensolver for a dense symmetric matrix.

    Each sweep visits every off-diagonal pair once, in round-robin order, so
    the ``n/2`` rotations of a round act on disjoint index pairs and are
    applied together. Stops once the off-diagonal Frobenius norm is ``<= tol``.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues, ascending.
    V : ndarray, shape (n, n)
        Orthonormal eigenvectors; ``V[:, i]`` pairs with ``w[i]``.
    """
    A = np.array(A, dtype=np.float64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.allclose(A, A.T, atol=1e-12, rtol=0):
        raise ValueError("matrix is not symmetric")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    if n == 1:
        return A.diagonal().copy(), V

    m = n + (n % 2)
    rounds = []
    for p, q in _round_robin(m):
        keep = q < n
        rounds.append((p[keep], q[keep]))

    offdiag = ~np.eye(n, dtype=bool)

    def off_norm():
        return float(np.linalg.norm(A[offdiag]))

    for _ in range(max_sweeps):
        if off_norm() <= tol:
            break
        for p, q in rounds:
            apq = A[p, q]
            active = np.abs(apq) > 1e-300
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            app, aqq = A[p, p], A[q, q]
            theta = (aqq - app) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            Ap, Aq = A[:, p], A[:, q]
            A[:, p], A[:, q] = c * Ap - s * Aq, s * Ap + c * Aq
            Ap, Aq = A[p, :], A[q, :]
            A[p, :], A[q, :] = c[:, None] * Ap - s[:, None] * Aq, s[:, None] * Ap + c[:, None] * Aq
            A[p, q] = 0.0
            A[q, p] = 0.0
            Vp, Vq = V[:, p], V[:, q]
            V[:, p], V[:, q] = c * Vp - s * Vq, s * Vp + c * Vq

    w = A.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def eigendecompose(
    op: NormalizedOperator,
    method: Literal["auto", "jacobi", "lapack"] = "auto",
) -> SpectralDecomposition:
    """Dense eigendecomposition of ``L`` (graphs up to ``ORACLE_MAX_NODES`` nodes).

    ``method="auto"`` uses Jacobi up to ``JACOBI_AUTO_MAX_NODES`` nodes and
    LAPACK ``eigh`` above that.
    """
    if op.mode != "laplacian":
        op = op.with_mode("laplacian")
    if op.n > ORACLE_MAX_NODES:
        raise OracleCapError(f"graph has {op.n} nodes; the dense oracle is capped at {ORACLE_MAX_NODES}")
    if method == "auto":
        method = "jacobi" if op.n <= JACOBI_AUTO_MAX_NODES else "lapack"
    dense = op.to_dense()
    if method == "jacobi":
        w, U = jacobi_eigh(dense)
    elif method == "lapack":
        w, U = np.linalg.eigh(dense)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return SpectralDecomposition(np.clip(w, 0.0, 2.0), U)


def _as_signal(dec: SpectralDecomposition, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim not in (1, 2) or x.shape[0] != dec.n:
        raise GraphError(f"signal has shape {x.shape}, expected ({dec.n},) or ({dec.n}, d)")
    return x


def spectral_apply(dec: SpectralDecomposition, response: np.ndarray, x) -> np.ndarray:
    """``U diag(response) U^T x`` for a response already sampled at the eigenvalues."""
    x = _as_signal(dec, x)
    U = dec.eigenvectors
    coeffs = U.T @ x
    coeffs = coeffs * (response if x.ndim == 1 else response[:, None])
    return U @ coeffs


def exact_filter_apply(dec: SpectralDecomposition, h: Callable, x) -> np.ndarray:
    """Apply ``h(L)`` exactly through the eigenbasis."""
    response = np.asarray(h(dec.eigenvalues), dtype=np.float64) * np.ones(dec.n)
    if not np.all(np.isfinite(response)):
        raise FilterError("filter is not finite on the spectrum")
    return spectral_apply(dec, response, x)


def energy_filter(gamma: Callable, alpha: float) -> Callable[[np.ndarray], np.ndarray]:
    """Response ``alpha / (alpha + (1 - alpha) gamma(lam))`` of the smoothing optimum."""
    return lambda lam: alpha / (alpha + (1.0 - alpha) * np.asarray(gamma(lam), dtype=np.float64))


def energy_solution(dec: SpectralDecomposition, gamma: Callable, alpha: float, x) -> np.ndarray:
    """Minimizer of ``(1 - alpha) z^T gamma(L) z + alpha ||z - x||^2``."""
    if not 0.0 < alpha <= 1.0:
        raise FilterError(f"alpha must lie in (0, 1], got {alpha}")
    g = np.asarray(gamma(dec.eigenvalues), dtype=np.float64) * np.ones(dec.n)
    if np.any(g < 0.0):
        i = int(np.argmin(g))
        raise FilterError(
            f"energy not positive semidefinite: gamma({dec.eigenvalues[i]:.6g}) = {g[i]:.6g}")
    return spectral_apply(dec, alpha / (alpha + (1.0 - alpha) * g), x)


def _power_series(op: NormalizedOperator, weights: np.ndarray, x) -> np.ndarray:
    P = op.with_mode("adjacency")
    term = np.asarray(x, dtype=np.float64)
    out = weights[0] * term
    for w in weights[1:]:
        term = P.matvec(term)
        out = out + w * term
    return out


def ppr_suffix_sum(op: NormalizedOperator, alpha: float, K: int, x) -> np.ndarray:
    """Truncated personalized-PageRank series ``sum_{k<=K} alpha (1-alpha)^k P^k x``."""
    if not 0.0 < alpha < 1.0:
        raise FilterError(f"alpha must lie in (0, 1), got {alpha}")
    if K < 0:
        raise FilterError(f"K must be non-negative, got {K}")
    weights = alpha * (1.0 - alpha) ** np.arange(K + 1)
    return _power_series(op, weights, x)


def heat_suffix_sum(op: NormalizedOperator, t: float, K: int, x) -> np.ndarray:
    """Truncated heat-kernel series ``sum_{k<=K} e^{-t} t^k / k! P^k x``."""
    if not t > 0.0:
        raise FilterError(f"t must be positive, got {t}")
    if K < 0:
        raise FilterError(f"K must be non-negative, got {K}")
    weights = np.array([math.exp(-t) * t**k / math.factorial(k) for k in range(K + 1)])
    return _power_series(op, weights, x)
