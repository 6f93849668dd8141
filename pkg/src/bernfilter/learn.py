"""Learning non-negative Bernstein coefficients from (signal, filtered signal) pairs.

The model output is ``sum_k theta_k B_k x`` (one layer) or the same operator
applied twice with shared ``theta`` (two layers). Training minimizes the
masked sum of squared errors with Adam, clamping ``theta`` at zero after
every step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bernstein import MAX_ORDER, BernCoeffs
from .errors import DatasetError, DivergenceError, FilterError
from .graph import Graph, NormalizedOperator, normalized_operator
from .optim import Adam
from .propagation import BasisOperatorCache, build_basis_cache
from .spectral import SpectralDecomposition, eigendecompose, exact_filter_apply


@dataclass(frozen=True, eq=False)
class RegressionTask:
    graph: Graph
    x: np.ndarray
    z: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        n = self.graph.n
        x = np.asarray(self.x, dtype=np.float64)
        z = np.asarray(self.z, dtype=np.float64)
        mask = np.ones(n, dtype=bool) if self.mask is None else np.asarray(self.mask, dtype=bool)
        for name, arr in (("x", x), ("z", z), ("mask", mask)):
            if arr.shape != (n,):
                raise DatasetError(f"{name} has shape {arr.shape}, expected ({n},)")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(z))):
            raise DatasetError("signals must be finite")
        if not mask.any():
            raise DatasetError("mask selects no nodes")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "mask", mask)


@dataclass
class LearnConfig:
    K: int = 10
    lr: float = 0.01
    max_epochs: int = 2000
    patience: int = 100
    seed: int = 0
    layers: int = 1
    init: str = "ones"  # or "random": uniform [0, 1) drawn from `seed`


@dataclass
class FitReport:
    coeffs: BernCoeffs
    sse: float
    r2: float
    losses: list[float] = field(repr=False)
    epochs: int = 0
    best_epoch: int = 0


def interior_mask(height: int, width: int) -> np.ndarray:
    """True for grid nodes off the image border."""
    m = np.zeros((height, width), dtype=bool)
    m[1:-1, 1:-1] = True
    return m.ravel()


def sse_and_r2(pred, target, mask=None) -> tuple[float, float]:
    """Masked sum of squared errors and coefficient of determination.

    R^2 is NaN when the masked target has zero variance.
    """
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {target.shape}")
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        pred, target = pred[mask], target[mask]
    sse = float(np.sum((pred - target) ** 2))
    sst = float(np.sum((target - target.mean()) ** 2))
    r2 = 1.0 - sse / sst if sst > 0.0 else math.nan
    return sse, r2


def make_regression_task(
    graph: Graph,
    h: Callable,
    x,
    mask=None,
    dec: SpectralDecomposition | None = None,
) -> RegressionTask:
    """Build a task whose target is the exact spectral filtering ``h(L) x``."""
    if dec is None:
        dec = eigendecompose(normalized_operator(graph))
    return RegressionTask(graph, x, exact_filter_apply(dec, h, x), mask)


def product_weights(K: int) -> np.ndarray:
    """``W[j, k] = C(K, j) C(K, k) / C(2K, j + k)``, so ``b_j^K b_k^K = W[j, k] b_{j+k}^{2K}``."""
    W = np.empty((K + 1, K + 1))
    for j in range(K + 1):
        for k in range(K + 1):
            W[j, k] = math.comb(K, j) * math.comb(K, k) / math.comb(2 * K, j + k)
    return W


class _FilterModel:
    """Output and gradient of the (one- or two-layer) shared-theta filter."""

    def __init__(self, op: NormalizedOperator, task: RegressionTask, K: int, layers: int):
        if layers not in (1, 2):
            raise FilterError(f"layers must be 1 or 2, got {layers}")
        if K * layers > MAX_ORDER:
            raise FilterError(f"order {K} with {layers} layers exceeds the maximum {MAX_ORDER}")
        self.K = K
        self.layers = layers
        self.mask = task.mask
        self.z = task.z
        self.cache: BasisOperatorCache = build_basis_cache(op, K * layers, task.x)
        self.masked_terms = self.cache.terms[:, task.mask]
        if layers == 2:
            self.W = product_weights(K)

    def effective(self, theta: np.ndarray) -> np.ndarray:
        """Coefficients on the cached basis (order ``K * layers``)."""
        if self.layers == 1:
            return theta
        phi = np.zeros(2 * self.K + 1)
        outer = np.outer(theta, theta) * self.W
        for j in range(self.K + 1):
            phi[j:j + self.K + 1] += outer[j]
        return phi

    def predict(self, theta: np.ndarray) -> np.ndarray:
        return self.cache.combine(self.effective(theta))

    def loss_and_grad(self, theta: np.ndarray) -> tuple[float, np.ndarray]:
        resid = self.effective(theta) @ self.masked_terms - self.z[self.mask]
        g_eff = 2.0 * (self.masked_terms @ resid)
        if self.layers == 1:
            grad = g_eff
        else:
            grad = np.array([
                2.0 * np.dot(theta * self.W[i], g_eff[i:i + self.K + 1]) for i in range(self.K + 1)
            ])
        return float(resid @ resid), grad


def sse_gradient(task: RegressionTask, theta, layers: int = 1, op: NormalizedOperator | None = None):
    """Masked SSE and its analytic gradient with respect to ``theta``."""
    theta = np.asarray(theta, dtype=np.float64)
    op = op if op is not None else normalized_operator(task.graph)
    return _FilterModel(op, task, theta.size - 1, layers).loss_and_grad(theta)


def learn_filter(
    task: RegressionTask,
    cfg: LearnConfig | None = None,
    op: NormalizedOperator | None = None,
) -> FitReport:
    """Fit ``theta >= 0`` by projected Adam with loss-based early stopping.

    Returns the coefficients from the epoch with the lowest loss.
    """
    cfg = cfg or LearnConfig()
    if cfg.K < 0 or cfg.K > MAX_ORDER:
        raise FilterError(f"order must lie in [0, {MAX_ORDER}], got {cfg.K}")
    op = op if op is not None else normalized_operator(task.graph)
    model = _FilterModel(op, task, cfg.K, cfg.layers)

    if cfg.init == "ones":
        theta = np.ones(cfg.K + 1)
    elif cfg.init == "random":
        theta = np.random.default_rng(cfg.seed).uniform(0.0, 1.0, cfg.K + 1)
    else:
        raise FilterError(f"unknown init {cfg.init!r}")
    params = {"theta": theta}
    opt = Adam(cfg.lr)

    losses = []
    best_loss, best_theta, best_epoch, wait = math.inf, theta.copy(), 0, 0
    epoch = 0
    for epoch in range(cfg.max_epochs):
        with np.errstate(over="ignore", invalid="ignore"):
            loss, grad = model.loss_and_grad(params["theta"])
        if not math.isfinite(loss):
            raise DivergenceError(f"loss became non-finite at epoch {epoch}")
        losses.append(loss)
        if loss < best_loss:
            best_loss, best_theta, best_epoch, wait = loss, params["theta"].copy(), epoch, 0
        else:
            wait += 1
            if wait >= cfg.patience:
                break
        opt.step(params, {"theta": grad})
        np.maximum(params["theta"], 0.0, out=params["theta"])

    coeffs = BernCoeffs(best_theta)
    sse, r2 = sse_and_r2(model.predict(best_theta), task.z, task.mask)
    return FitReport(coeffs=coeffs, sse=sse, r2=r2, losses=losses, epochs=epoch + 1, best_epoch=best_epoch)
