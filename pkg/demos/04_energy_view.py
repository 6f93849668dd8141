# %% [markdown]
# # Filters as solutions of a smoothing objective
#
# Minimizing (1 - alpha) z' gamma(L) z + alpha |z - x|^2 gives the filter
# alpha / (alpha + (1 - alpha) gamma(lambda)). Two classic propagation
# schemes fall out of particular choices of gamma.

# %%
import numpy as np

from bernfilter import eigendecompose, energy_solution, heat_suffix_sum, normalized_operator, ppr_suffix_sum
from bernfilter.graph import build_graph

rng = np.random.default_rng(0)
n = 25
pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.2]
op = normalized_operator(build_graph(pairs, n))
dec = eigendecompose(op)
x = rng.standard_normal(n)

# %% [markdown]
# gamma(lambda) = lambda gives personalized PageRank. Truncating the power
# series after K terms leaves an error below (1 - alpha)^(K+1) / alpha.

# %%
alpha = 0.1
exact = energy_solution(dec, lambda lam: lam, alpha, x)
for K in (8, 16, 32, 64):
    err = np.abs(ppr_suffix_sum(op, alpha, K, x) - exact).max()
    bound = (1 - alpha) ** (K + 1) / alpha * np.linalg.norm(x)
    print(f"K={K:2d}  error {err:.2e}  bound {bound:.2e}")

# %% [markdown]
# gamma(lambda) = exp(t lambda) - 1 with alpha = 1/2 gives the heat kernel
# exp(-t L), whose series converges much faster.

# %%
t = 1.0
exact = energy_solution(dec, lambda lam: np.exp(t * lam) - 1, 0.5, x)
for K in (4, 8, 16):
    print(f"K={K:2d}  heat error {np.abs(heat_suffix_sum(op, t, K, x) - exact).max():.2e}")

# %% [markdown]
# A gamma that goes negative has no minimizer and is rejected.

# %%
from bernfilter.errors import FilterError

try:
    energy_solution(dec, lambda lam: 1 - lam, 0.5, x)
except FilterError as exc:
    print("rejected:", exc)
