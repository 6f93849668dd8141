import numpy as np
import pytest

from bernfilter.graph import build_graph

_CRITERIA_KEY = pytest.StashKey[list]()


def random_graph(n, p, seed):
    """Erdos-Renyi graph; may contain isolated nodes."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return build_graph(np.column_stack([iu[keep], ju[keep]]), n)


def dense_laplacian(graph):
    """L built entry by entry from the edge list, independent of the sparse path."""
    n = graph.n
    A = np.zeros((n, n))
    for u, v in graph.edges():
        A[u, v] = A[v, u] = 1.0
    deg = A.sum(axis=1)
    L = np.eye(n)
    for u in range(n):
        for v in range(n):
            if A[u, v]:
                L[u, v] -= 1.0 / np.sqrt(deg[u] * deg[v])
    return L


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def cycle4():
    return build_graph([(0, 1), (1, 2), (2, 3), (3, 0)], 4)


@pytest.fixture
def k2():
    return build_graph([(0, 1)], 2)


def pytest_configure(config):
    config.stash[_CRITERIA_KEY] = []


@pytest.fixture
def record_criterion(request):
    """Log one pass/fail line per acceptance criterion, then assert it."""
    lines = request.config.stash[_CRITERIA_KEY]

    def record(number, title, ok, detail=""):
        lines.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]")
        assert ok, f"criterion {number} failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
