"""Node classification with an MLP followed by Bernstein propagation.

    H = relu(X W1 + b1),  F = H W2 + b2,  Z = sum_k theta_k B_k F

Everything, including the coefficient gradient ``dL/dtheta_k = <dL/dZ, B_k F>``,
is computed by hand in numpy.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .bernstein import BernCoeffs
from .errors import DatasetError, DivergenceError
from .graph import Graph, NormalizedOperator, normalized_operator
from .optim import Adam
from .propagation import BasisOperatorCache, bernnet_apply, build_basis_cache

log = logging.getLogger(__name__)

LINEAR_PARAMS = ("W1", "b1", "W2", "b2")


@dataclass(eq=False)
class NodeDataset:
    graph: Graph
    features: np.ndarray
    labels: np.ndarray
    num_classes: int | None = None
    train_mask: np.ndarray | None = None
    val_mask: np.ndarray | None = None
    test_mask: np.ndarray | None = None

    def __post_init__(self):
        n = self.graph.n
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2 or self.features.shape[0] != n:
            raise DatasetError(f"features have shape {self.features.shape}, expected ({n}, d)")
        if self.labels.shape != (n,):
            raise DatasetError(f"labels have shape {self.labels.shape}, expected ({n},)")
        if not np.all(np.isfinite(self.features)):
            raise DatasetError("features contain non-finite values")
        if self.labels.min() < 0:
            raise DatasetError("labels must be non-negative class ids")
        if self.num_classes is None:
            self.num_classes = int(self.labels.max()) + 1
        elif self.labels.max() >= self.num_classes:
            raise DatasetError(f"label {self.labels.max()} >= number of classes {self.num_classes}")
        if self.train_mask is not None:
            self._check_masks()

    def _check_masks(self):
        masks = [np.asarray(m, dtype=bool) for m in (self.train_mask, self.val_mask, self.test_mask)]
        for m in masks:
            if m.shape != (self.graph.n,):
                raise DatasetError(f"split mask has shape {m.shape}, expected ({self.graph.n},)")
        if np.any(masks[0] & masks[1]) or np.any(masks[0] & masks[2]) or np.any(masks[1] & masks[2]):
            raise DatasetError("split masks overlap")
        self.train_mask, self.val_mask, self.test_mask = masks
        missing = set(range(self.num_classes)) - set(np.unique(self.labels[masks[0]]).tolist())
        if missing:
            # Real heterophily benchmarks have near-empty classes; flag rather than reject.
            log.warning("classes %s have no training nodes", sorted(missing))

    def with_splits(self, train, val, test) -> "NodeDataset":
        return replace(self, train_mask=train, val_mask=val, test_mask=test)

    @cached_property
    def op(self) -> NormalizedOperator:
        return normalized_operator(self.graph)

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(eq=False)
class ModelParams:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    theta: np.ndarray

    def as_dict(self) -> dict[str, np.ndarray]:
        return {"W1": self.W1, "b1": self.b1, "W2": self.W2, "b2": self.b2, "theta": self.theta}

    def copy(self) -> "ModelParams":
        return ModelParams(**{k: v.copy() for k, v in self.as_dict().items()})

    @property
    def coeffs(self) -> BernCoeffs:
        return BernCoeffs(self.theta)


@dataclass
class TrainConfig:
    hidden: int = 64
    lr_linear: float = 0.01
    lr_prop: float = 0.01
    dropout_linear: float = 0.5
    dropout_prop: float = 0.5
    weight_decay: float = 0.0005
    K: int = 10
    max_epochs: int = 1000
    patience: int = 200
    seed: int = 0
    freeze_theta: bool = False


# Per-dataset settings of the published benchmark runs.
PRESETS: dict[str, TrainConfig] = {
    "cora": TrainConfig(lr_linear=0.01, lr_prop=0.01, dropout_prop=0.0, weight_decay=0.0005),
    "citeseer": TrainConfig(lr_linear=0.01, lr_prop=0.01, dropout_prop=0.5, weight_decay=0.0005),
    "pubmed": TrainConfig(lr_linear=0.01, lr_prop=0.01, dropout_prop=0.0, weight_decay=0.0),
    "computers": TrainConfig(lr_linear=0.01, lr_prop=0.05, dropout_prop=0.6, weight_decay=0.0005),
    "photo": TrainConfig(lr_linear=0.01, lr_prop=0.01, dropout_prop=0.5, weight_decay=0.0005),
    "chameleon": TrainConfig(lr_linear=0.05, lr_prop=0.01, dropout_prop=0.7, weight_decay=0.0),
    "actor": TrainConfig(lr_linear=0.05, lr_prop=0.01, dropout_prop=0.9, weight_decay=0.0),
    "squirrel": TrainConfig(lr_linear=0.05, lr_prop=0.01, dropout_prop=0.6, weight_decay=0.0),
    "texas": TrainConfig(lr_linear=0.05, lr_prop=0.002, dropout_prop=0.5, weight_decay=0.0005),
    "cornell": TrainConfig(lr_linear=0.05, lr_prop=0.001, dropout_prop=0.5, weight_decay=0.0005),
}


def init_params(d: int, num_classes: int, cfg: TrainConfig) -> ModelParams:
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights; theta starts as the all-pass filter."""
    rng = np.random.default_rng(cfg.seed)
    a1, a2 = 1.0 / math.sqrt(d), 1.0 / math.sqrt(cfg.hidden)
    return ModelParams(
        W1=rng.uniform(-a1, a1, (d, cfg.hidden)),
        b1=rng.uniform(-a1, a1, cfg.hidden),
        W2=rng.uniform(-a2, a2, (cfg.hidden, num_classes)),
        b2=rng.uniform(-a2, a2, num_classes),
        theta=np.ones(cfg.K + 1),
    )


def make_splits(n: int, ratios=(0.6, 0.2, 0.2), seed: int = 0):
    """Random disjoint train/val/test masks covering all ``n`` nodes.

    Sizes are ``round(r_train * n)``, ``round(r_val * n)`` and the remainder.
    """
    if n < 5:
        raise DatasetError(f"need at least 5 nodes to split, got {n}")
    if len(ratios) != 3 or abs(sum(ratios) - 1.0) > 1e-9 or min(ratios) < 0:
        raise DatasetError(f"ratios must be three non-negative numbers summing to 1, got {ratios}")
    n_train = int(round(ratios[0] * n))
    n_val = int(round(ratios[1] * n))
    perm = np.random.default_rng(seed).permutation(n)
    masks = []
    for idx in (perm[:n_train], perm[n_train:n_train + n_val], perm[n_train + n_val:]):
        m = np.zeros(n, dtype=bool)
        m[idx] = True
        masks.append(m)
    return tuple(masks)


def _dropout(a: np.ndarray, rate: float, rng) -> tuple[np.ndarray, np.ndarray | None]:
    if rate <= 0.0 or rng is None:
        return a, None
    keep = (rng.random(a.shape) >= rate) / (1.0 - rate)
    return a * keep, keep


def mlp_forward(params: ModelParams, X: np.ndarray, cfg: TrainConfig, rng=None):
    """The feature transform ``f(X)``; dropout is active only when ``rng`` is given."""
    Xd, keep_x = _dropout(X, cfg.dropout_linear, rng)
    pre = Xd @ params.W1 + params.b1
    H = np.maximum(pre, 0.0)
    Hd, keep_h = _dropout(H, cfg.dropout_linear, rng)
    F = Hd @ params.W2 + params.b2
    return F, {"Xd": Xd, "pre": pre, "Hd": Hd, "keep_h": keep_h}


@dataclass
class ForwardCache:
    mlp: dict
    keep_f: np.ndarray | None
    basis: BasisOperatorCache = field(repr=False)


def forward(params: ModelParams, dataset: NodeDataset, cfg: TrainConfig, train: bool = False, rng=None):
    """Logits ``Z`` (n x C) and the activations needed for backprop.

    In train mode ``rng`` drives dropout; in eval mode no dropout is applied.
    """
    rng = rng if train else None
    F, mlp_cache = mlp_forward(params, dataset.features, cfg, rng)
    Fd, keep_f = _dropout(F, cfg.dropout_prop, rng)
    basis = build_basis_cache(dataset.op, params.theta.size - 1, Fd)
    Z = basis.combine(params.theta)
    if not np.all(np.isfinite(Z)):
        raise DivergenceError("non-finite logits")
    return Z, ForwardCache(mlp_cache, keep_f, basis)


def _log_softmax(Z: np.ndarray) -> np.ndarray:
    shifted = Z - Z.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def cross_entropy(Z: np.ndarray, labels: np.ndarray, mask: np.ndarray) -> float:
    logp = _log_softmax(Z[mask])
    return float(-logp[np.arange(logp.shape[0]), labels[mask]].mean())


def loss_and_grads(
    params: ModelParams,
    dataset: NodeDataset,
    mask: np.ndarray,
    cfg: TrainConfig,
    train: bool = True,
    rng=None,
) -> tuple[float, dict[str, np.ndarray]]:
    """Masked mean cross-entropy plus ``weight_decay/2 * (|W1|^2 + |W2|^2)`` and all gradients."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise DatasetError("loss mask selects no nodes")
    Z, cache = forward(params, dataset, cfg, train=train, rng=rng)
    m = int(mask.sum())
    logp = _log_softmax(Z[mask])
    y = dataset.labels[mask]
    wd = cfg.weight_decay
    loss = -logp[np.arange(m), y].mean() + 0.5 * wd * (np.sum(params.W1**2) + np.sum(params.W2**2))

    dZ = np.zeros_like(Z)
    probs = np.exp(logp)
    probs[np.arange(m), y] -= 1.0
    dZ[mask] = probs / m

    g_theta = np.tensordot(cache.basis.terms, dZ, axes=([1, 2], [0, 1]))
    # the filter operator is symmetric, so its adjoint is itself
    dF = bernnet_apply(dataset.op, BernCoeffs(params.theta), dZ)
    if cache.keep_f is not None:
        dF = dF * cache.keep_f
    mc = cache.mlp
    g_W2 = mc["Hd"].T @ dF + wd * params.W2
    g_b2 = dF.sum(axis=0)
    dH = dF @ params.W2.T
    if mc["keep_h"] is not None:
        dH = dH * mc["keep_h"]
    dpre = dH * (mc["pre"] > 0.0)
    g_W1 = mc["Xd"].T @ dpre + wd * params.W1
    g_b1 = dpre.sum(axis=0)
    return float(loss), {"W1": g_W1, "b1": g_b1, "W2": g_W2, "b2": g_b2, "theta": g_theta}


def predict(params: ModelParams, dataset: NodeDataset, cfg: TrainConfig) -> np.ndarray:
    Z, _ = forward(params, dataset, cfg, train=False)
    return Z.argmax(axis=1)


def accuracy(pred: np.ndarray, labels: np.ndarray, mask: np.ndarray) -> float:
    """Micro-F1, which equals accuracy for single-label classification."""
    return float(np.mean(pred[mask] == labels[mask]))


@dataclass
class TrainResult:
    params: ModelParams
    test_accuracy: float
    val_accuracy: float
    best_epoch: int
    history: list[dict] = field(repr=False)


def train(dataset: NodeDataset, cfg: TrainConfig | None = None, params: ModelParams | None = None) -> TrainResult:
    """Full-batch training with Adam and validation-loss early stopping.

    The linear layers and ``theta`` use separate learning rates; ``theta`` is
    clamped at zero after every step. Returns the best-validation parameters.
    """
    cfg = cfg or TrainConfig()
    if dataset.train_mask is None:
        raise DatasetError("dataset has no split masks; use make_splits / with_splits first")
    params = params.copy() if params is not None else init_params(
        dataset.features.shape[1], dataset.num_classes, cfg)
    lrs = {name: cfg.lr_linear for name in LINEAR_PARAMS}
    lrs["theta"] = cfg.lr_prop
    opt = Adam(lrs)
    live = params.as_dict()

    best_val, best, best_epoch, wait = math.inf, params.copy(), 0, 0
    history = []
    for epoch in range(cfg.max_epochs):
        rng = np.random.default_rng([cfg.seed, epoch])
        loss, grads = loss_and_grads(params, dataset, dataset.train_mask, cfg, train=True, rng=rng)
        if not math.isfinite(loss):
            raise DivergenceError(f"training loss became non-finite at epoch {epoch}")
        if cfg.freeze_theta:
            grads.pop("theta")
        opt.step(live, grads)
        np.maximum(params.theta, 0.0, out=params.theta)

        Z, _ = forward(params, dataset, cfg, train=False)
        val_loss = cross_entropy(Z, dataset.labels, dataset.val_mask)
        pred = Z.argmax(axis=1)
        history.append({
            "epoch": epoch,
            "train_loss": loss,
            "val_loss": val_loss,
            "val_acc": accuracy(pred, dataset.labels, dataset.val_mask),
        })
        if val_loss < best_val:
            best_val, best, best_epoch, wait = val_loss, params.copy(), epoch, 0
        else:
            wait += 1
            if wait >= cfg.patience:
                break

    pred = predict(best, dataset, cfg)
    return TrainResult(
        params=best,
        test_accuracy=accuracy(pred, dataset.labels, dataset.test_mask),
        val_accuracy=accuracy(pred, dataset.labels, dataset.val_mask),
        best_epoch=best_epoch,
        history=history,
    )


def run_splits(
    dataset: NodeDataset,
    cfg: TrainConfig,
    n_splits: int = 10,
    seed: int = 0,
    fixed_splits: dict | None = None,
) -> list[TrainResult]:
    """Train on ``n_splits`` seeded 60/20/20 splits (split ``i`` uses seed ``seed + i``).

    ``fixed_splits`` maps a seed to ``(train, val, test)`` masks that replace
    the random split for that seed.
    """
    fixed_splits = fixed_splits or {}
    results = []
    for i in range(n_splits):
        masks = fixed_splits.get(seed + i) or make_splits(dataset.n, seed=seed + i)
        results.append(train(dataset.with_splits(*masks), replace(cfg, seed=seed + i)))
    return results
