"""Text formats, dataset loading, and synthetic data.

Formats
-------
edges.txt      one edge per line, two whitespace-separated 0-based ids; ``#`` comments
coefficients   line 1: K; line 2: K + 1 space-separated values (17 significant digits)
curve CSV      header ``lambda,value``
signal CSV     one value per line, or n rows of d comma-separated values; no header
features.csv   n rows, d comma-separated columns, no header
labels.txt     one integer class id per line
splits/<seed>.json   {"train": [...], "val": [...], "test": [...]} node indices
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bernstein import BernCoeffs, eval_filter
from .classify import NodeDataset
from .errors import DatasetError, FilterError
from .graph import Graph, build_graph

FLOAT_FMT = "%.17g"


def _finite(arr: np.ndarray, what: str, path) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        bad = np.argwhere(~np.isfinite(arr))[0]
        raise DatasetError(f"{path}: non-finite value in {what} at position {tuple(int(i) for i in bad)}")
    return arr


def read_edge_list(path, n: int | None = None) -> Graph:
    """Load an edge list; the node count defaults to ``max id + 1``."""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"missing edge file {path}")
    pairs = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DatasetError(f"{path}:{lineno}: expected two node ids, got {line!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise DatasetError(f"{path}:{lineno}: node ids must be integers, got {line!r}") from None
    edges = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    if n is None:
        if edges.size == 0:
            raise DatasetError(f"{path}: no edges and no node count given")
        n = int(edges.max()) + 1
    return build_graph(edges, n)


def write_edge_list(graph: Graph, path) -> None:
    edges = graph.edges()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# n={graph.n}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")


def write_coeffs(c: BernCoeffs, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{c.K}\n")
        fh.write(" ".join(FLOAT_FMT % v for v in c.theta) + "\n")


def read_coeffs(path) -> BernCoeffs:
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"missing coefficient file {path}")
    lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    if len(lines) != 2:
        raise DatasetError(f"{path}: expected 2 lines (K, coefficients), got {len(lines)}")
    try:
        K = int(lines[0])
        theta = np.array([float(v) for v in lines[1].split()])
    except ValueError as exc:
        raise DatasetError(f"{path}: {exc}") from None
    if theta.size != K + 1:
        raise DatasetError(f"{path}: order {K} needs {K + 1} coefficients, found {theta.size}")
    return BernCoeffs(_finite(theta, "coefficients", path))


def read_signal(path) -> np.ndarray:
    """A vector (one value per line) or an (n, d) matrix."""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"missing signal file {path}")
    try:
        arr = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError as exc:
        raise DatasetError(f"{path}: {exc}") from None
    if arr.size == 0:
        raise DatasetError(f"{path}: empty signal")
    _finite(arr, "signal", path)
    return arr[:, 0] if arr.shape[1] == 1 else arr


def write_signal(x, path) -> None:
    x = np.asarray(x, dtype=np.float64)
    np.savetxt(path, x.reshape(x.shape[0], -1), delimiter=",", fmt=FLOAT_FMT)


def read_mask(path, n: int) -> np.ndarray:
    """0/1 per line."""
    m = read_signal(path)
    if m.shape != (n,) or not np.all((m == 0) | (m == 1)):
        raise DatasetError(f"{path}: mask must hold {n} values, each 0 or 1")
    return m.astype(bool)


@dataclass(frozen=True, eq=False)
class CurveTable:
    """Sampled spectral response over [0, 2]."""

    lambdas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=np.float64)
        if lam.size < 2 or lam[0] != 0.0 or lam[-1] != 2.0 or np.any(np.diff(lam) <= 0):
            raise FilterError("curve must be strictly increasing from 0 to 2")

    def rows(self):
        return list(zip(self.lambdas.tolist(), self.values.tolist()))


def export_curve(c: BernCoeffs, points: int = 1000) -> CurveTable:
    if points < 2:
        raise FilterError("need at least 2 curve points")
    lam = np.linspace(0.0, 2.0, points)
    return CurveTable(lam, np.asarray(eval_filter(c, lam)))


def write_curve(table: CurveTable, path) -> None:
    data = np.column_stack([table.lambdas, table.values])
    np.savetxt(path, data, delimiter=",", fmt=FLOAT_FMT, header="lambda,value", comments="")


def read_curve(path) -> CurveTable:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    _finite(data, "curve", path)
    return CurveTable(data[:, 0], data[:, 1])


def load_dataset(directory, num_classes: int | None = None) -> NodeDataset:
    """Read ``edges.txt``, ``features.csv``, ``labels.txt`` from a directory.

    The node count comes from the labels file, so isolated trailing nodes
    survive. Split masks are not loaded here; see ``load_split``.
    """
    directory = Path(directory)
    for name in ("edges.txt", "features.csv", "labels.txt"):
        if not (directory / name).exists():
            raise DatasetError(f"missing file {directory / name}")
    label_lines = [ln.strip() for ln in (directory / "labels.txt").read_text(encoding="utf-8").splitlines()]
    label_lines = [ln for ln in label_lines if ln]
    if not label_lines:
        raise DatasetError(f"{directory / 'labels.txt'}: no labels")
    try:
        labels = np.array([int(v) for v in label_lines], dtype=np.int64)
    except ValueError as exc:
        raise DatasetError(f"{directory / 'labels.txt'}: {exc}") from None
    n = labels.size
    try:
        features = np.loadtxt(directory / "features.csv", delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError as exc:
        raise DatasetError(f"{directory / 'features.csv'}: {exc}") from None
    _finite(features, "features", directory / "features.csv")
    if features.shape[0] != n:
        raise DatasetError(
            f"features.csv has {features.shape[0]} rows but labels.txt has {n} entries")
    graph = read_edge_list(directory / "edges.txt", n=n)
    return NodeDataset(graph, features, labels, num_classes=num_classes)


def write_dataset(dataset: NodeDataset, directory) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_edge_list(dataset.graph, directory / "edges.txt")
    np.savetxt(directory / "features.csv", dataset.features, delimiter=",", fmt=FLOAT_FMT)
    np.savetxt(directory / "labels.txt", dataset.labels, fmt="%d")


def write_split(masks, path) -> None:
    names = ("train", "val", "test")
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(json.dumps({k: np.flatnonzero(m).tolist() for k, m in zip(names, masks)}))


def load_split(path, n: int):
    try:
        record = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DatasetError(f"{path}: {exc}") from None
    masks = []
    for key in ("train", "val", "test"):
        idx = np.asarray(record.get(key, []), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise DatasetError(f"{path}: {key} index out of range [0, {n})")
        m = np.zeros(n, dtype=bool)
        m[idx] = True
        masks.append(m)
    return tuple(masks)


def load_split_dir(directory, n: int, seeds) -> dict:
    """Masks from ``directory/splits/<seed>.json`` for each seed whose file exists."""
    split_dir = Path(directory) / "splits"
    return {seed: load_split(split_dir / f"{seed}.json", n)
            for seed in seeds if (split_dir / f"{seed}.json").exists()}


def synth_grid_signal(height: int, width: int, seed: int = 0, kind: str = "random") -> np.ndarray:
    """Image-like signal in [0, 1] on a grid, flattened row-major.

    ``random``: iid uniform pixels. ``gradient``: linear ramp along the
    flattened index. ``checker``: 1 where ``r + c`` is even.
    """
    n = height * width
    if kind == "random":
        return np.random.default_rng(seed).uniform(0.0, 1.0, n)
    if kind == "gradient":
        return np.linspace(0.0, 1.0, n) if n > 1 else np.zeros(1)
    if kind == "checker":
        r, c = np.divmod(np.arange(n), width)
        return ((r + c) % 2 == 0).astype(np.float64)
    raise DatasetError(f"unknown signal kind {kind!r}; use random, gradient or checker")


def two_cluster_dataset(size: int = 10, noise: float = 0.5, bridges: int = 1, seed: int = 0) -> NodeDataset:
    """Two ``size``-node cliques joined by ``bridges`` edges.

    Features are the one-hot cluster id plus Gaussian noise; labels are the
    cluster ids.
    """
    rng = np.random.default_rng(seed)
    edges = []
    for offset in (0, size):
        edges += [(offset + i, offset + j) for i in range(size) for j in range(i + 1, size)]
    for _ in range(bridges):
        edges.append((int(rng.integers(size)), size + int(rng.integers(size))))
    labels = np.repeat([0, 1], size)
    features = np.eye(2)[labels] + noise * rng.standard_normal((2 * size, 2))
    return NodeDataset(build_graph(edges, 2 * size), features, labels)
