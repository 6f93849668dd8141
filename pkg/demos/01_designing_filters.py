# %% [markdown]
# # Designing spectral filters with Bernstein coefficients
#
# A filter is a response h(lambda) on [0, 2], the spectrum of the normalized
# Laplacian. Sampling h at lambda = 2k/K gives K + 1 Bernstein coefficients,
# and the resulting polynomial never leaves the range of those samples.

# %%
import numpy as np

from bernfilter import FILTER_NAMES, design_coeffs, eval_filter, named_filter, validate_filter

grid = np.linspace(0.0, 2.0, 1000)
print("catalog:", ", ".join(FILTER_NAMES))

# %% [markdown]
# Linear responses are reproduced exactly at any order.

# %%
for name in ("all_pass", "linear_low", "linear_high"):
    c = design_coeffs(named_filter(name), 6)
    print(f"{name:12s} theta = {np.round(c.theta, 3)}")

# %% [markdown]
# Smooth responses converge as K grows. The error shrinks slowly, roughly
# like 1/K, which is the price of the shape guarantees.

# %%
h = named_filter("exp_low")
for K in (4, 10, 20, 40, 64):
    err = np.abs(eval_filter(design_coeffs(h, K), grid) - h(grid)).max()
    print(f"K={K:2d}  sup error {err:.4f}")

# %% [markdown]
# Coefficients in [0, 1] always give a valid response. A first-order
# polynomial 1 - lambda, written in the monomial basis, does not: it turns
# negative past lambda = 1, and the validator says so.

# %%
from bernfilter import monomial_to_bernstein

good = validate_filter(design_coeffs(named_filter("comb"), 10))
bad = validate_filter(monomial_to_bernstein([1.0, -1.0], in_lambda=True))
print("comb valid:", good.valid)
print("1 - lambda valid:", bad.valid, " min", round(bad.min_value, 3),
      " first violation at lambda =", round(float(bad.violations[0]), 3))
