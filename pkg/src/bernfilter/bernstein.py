"""Bernstein basis, filter design, and validity checks on the spectrum [0, 2].

A filter is identified by its order ``K`` and ``K + 1`` coefficients; its
spectral response is

    g(lam) = sum_k theta_k * C(K, k) * (1 - lam/2)^(K-k) * (lam/2)^k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import FilterError

MAX_ORDER = 64


def _check_order(K: int) -> int:
    if int(K) != K or K < 0 or K > MAX_ORDER:
        raise FilterError(f"order must be an integer in [0, {MAX_ORDER}], got {K}")
    return int(K)


@dataclass(frozen=True, eq=False)
class BernCoeffs:
    """Order-``K`` Bernstein coefficients ``theta`` (length ``K + 1``)."""

    theta: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=np.float64).reshape(-1)
        if theta.size == 0:
            raise FilterError("need at least one coefficient")
        _check_order(theta.size - 1)
        if not np.all(np.isfinite(theta)):
            raise FilterError("coefficients must be finite")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @property
    def K(self) -> int:
        return self.theta.size - 1

    def __call__(self, lam):
        return eval_filter(self, lam)

    def __repr__(self):
        return f"BernCoeffs(K={self.K}, theta={np.array2string(self.theta, precision=4)})"


@dataclass(frozen=True)
class FilterFn:
    """A named scalar response ``h: [0, 2] -> R``, vectorized over arrays."""

    name: str
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=np.float64)
        return np.broadcast_to(np.asarray(self.func(lam), dtype=np.float64), lam.shape).copy()

    @classmethod
    def from_samples(cls, lambdas, values, name: str = "tabulated") -> "FilterFn":
        """Piecewise-linear interpolation of a sampled response."""
        lambdas = np.asarray(lambdas, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        if lambdas.shape != values.shape or lambdas.size < 2:
            raise FilterError("need at least two (lambda, value) samples of equal length")
        if lambdas[0] > 0 or lambdas[-1] < 2 or np.any(np.diff(lambdas) <= 0):
            raise FilterError("samples must be strictly increasing and cover [0, 2]")
        return cls(name, lambda lam: np.interp(lam, lambdas, values))


def _log_binom(K: int, k: np.ndarray) -> np.ndarray:
    table = np.array([math.log(math.comb(K, j)) for j in range(K + 1)])
    return table[k]


def bernstein_basis(k, K: int, t):
    """``C(K, k) (1 - t)^(K - k) t^k``, evaluated in log space.

    ``k`` and ``t`` broadcast against each other. Endpoints are handled
    exactly: ``b_k(0) = [k == 0]`` and ``b_k(1) = [k == K]``.
    """
    K = _check_order(K)
    k = np.asarray(k)
    t = np.asarray(t, dtype=np.float64)
    if np.any(k < 0) or np.any(k > K) or np.any(k != np.round(k)):
        raise FilterError(f"basis index must be an integer in [0, {K}]")
    if np.any(~(t >= 0.0) | ~(t <= 1.0)):
        raise FilterError("t must lie in [0, 1]")
    k = k.astype(np.int64)
    k, t = np.broadcast_arrays(k, t)
    out = np.zeros(t.shape)
    lo, hi = t == 0.0, t == 1.0
    out[lo & (k == 0)] = 1.0
    out[hi & (k == K)] = 1.0
    inner = ~(lo | hi)
    if np.any(inner):
        ki, ti = k[inner], t[inner]
        out[inner] = np.exp(_log_binom(K, ki) + (K - ki) * np.log1p(-ti) + ki * np.log(ti))
    return out if out.ndim else float(out)


def basis_matrix(K: int, t) -> np.ndarray:
    """All ``K + 1`` basis functions at points ``t``; shape ``t.shape + (K + 1,)``."""
    t = np.asarray(t, dtype=np.float64)
    return bernstein_basis(np.arange(K + 1), K, t[..., None])


def eval_filter(c: BernCoeffs, lam):
    """Spectral response ``g(lam)`` for ``lam`` in [0, 2]."""
    lam = np.asarray(lam, dtype=np.float64)
    if np.any(~(lam >= 0.0) | ~(lam <= 2.0)):
        raise FilterError("lambda must lie in [0, 2]")
    out = basis_matrix(c.K, lam / 2.0) @ c.theta
    return out if out.ndim else float(out)


def design_coeffs(h: Callable, K: int) -> BernCoeffs:
    """Sample ``h`` at ``2k/K``; the resulting polynomial converges to ``h`` as K grows."""
    K = _check_order(K)
    if K < 1:
        raise FilterError("design needs order K >= 1")
    grid = 2.0 * np.arange(K + 1) / K
    theta = np.asarray(h(grid), dtype=np.float64) * np.ones(K + 1)
    if not np.all(np.isfinite(theta)):
        bad = grid[~np.isfinite(theta)][0]
        raise FilterError(f"filter is not finite at lambda={bad}")
    return BernCoeffs(theta)


def monomial_to_bernstein(w, order: int | None = None, *, in_lambda: bool = False) -> BernCoeffs:
    """Convert ``sum_j w_j t^j`` (t in [0, 1]) to Bernstein coefficients.

    Uses ``theta_k = sum_{j<=k} C(k, j) / C(K, j) * w_j``. With ``in_lambda``
    the input is read as a polynomial in ``lam = 2t``. ``order`` may exceed the
    degree (degree elevation); it defaults to ``len(w) - 1``.
    """
    w = np.asarray(w, dtype=np.float64).reshape(-1)
    if w.size == 0:
        raise FilterError("need at least one monomial coefficient")
    K = w.size - 1 if order is None else int(order)
    if K > MAX_ORDER:
        raise FilterError(f"order {K} exceeds the supported maximum {MAX_ORDER}")
    if K < w.size - 1:
        raise FilterError(f"order {K} is below the polynomial degree {w.size - 1}")
    if in_lambda:
        w = w * 2.0 ** np.arange(w.size)
    w = np.concatenate([w, np.zeros(K + 1 - w.size)])
    theta = np.zeros(K + 1)
    for k in range(K + 1):
        for j in range(k + 1):
            theta[k] += math.comb(k, j) / math.comb(K, j) * w[j]
    return BernCoeffs(theta)


@dataclass(frozen=True)
class ValidityReport:
    """Grid check of ``0 <= g <= 1`` plus the coefficient-range sufficient condition."""

    min_value: float
    max_value: float
    nonneg_ok: bool
    bounded_ok: bool
    theta_nonneg: bool
    theta_bounded: bool
    violations: np.ndarray = field(repr=False)

    @property
    def valid(self) -> bool:
        return self.nonneg_ok and self.bounded_ok

    def as_dict(self) -> dict:
        return {
            "min_value": self.min_value,
            "max_value": self.max_value,
            "nonneg_ok": self.nonneg_ok,
            "bounded_ok": self.bounded_ok,
            "theta_nonneg": self.theta_nonneg,
            "theta_bounded": self.theta_bounded,
            "num_violations": int(self.violations.size),
            "first_violation": float(self.violations[0]) if self.violations.size else None,
        }


def validate_filter(c: BernCoeffs, grid_points: int = 1000) -> ValidityReport:
    if grid_points < 2:
        raise FilterError("grid_points must be at least 2")
    lam = np.linspace(0.0, 2.0, grid_points)
    g = eval_filter(c, lam)
    tol = 1e-12
    bad = (g < -tol) | (g > 1.0 + tol)
    return ValidityReport(
        min_value=float(g.min()),
        max_value=float(g.max()),
        nonneg_ok=bool(g.min() >= -tol),
        bounded_ok=bool(g.max() <= 1.0 + tol),
        theta_nonneg=bool(c.theta.min() >= 0.0),
        theta_bounded=bool(c.theta.max() <= 1.0),
        violations=lam[bad],
    )


def _impulse(at: float):
    return lambda lam: (lam == at).astype(np.float64)


def _low_band_pass(lam):
    out = np.where(lam <= 0.5, 1.0, 0.0)
    mid = (lam > 0.5) & (lam < 1.0)
    out = np.where(mid, np.exp(-100.0 * (lam - 0.5) ** 2), out)
    return np.where(lam >= 1.0, np.exp(-50.0 * (lam - 1.5) ** 2), out)


_CATALOG: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "all_pass": lambda lam: np.ones_like(lam),
    "linear_low": lambda lam: 1.0 - lam / 2.0,
    "linear_high": lambda lam: lam / 2.0,
    "impulse_low": _impulse(0.0),
    "impulse_high": _impulse(2.0),
    "impulse_band": _impulse(1.0),
    "exp_low": lambda lam: np.exp(-10.0 * lam**2),
    "exp_high": lambda lam: 1.0 - np.exp(-10.0 * lam**2),
    "exp_band": lambda lam: np.exp(-10.0 * (lam - 1.0) ** 2),
    "exp_band_reject": lambda lam: 1.0 - np.exp(-10.0 * (lam - 1.0) ** 2),
    "comb": lambda lam: np.abs(np.sin(np.pi * lam)),
    "low_band_pass": _low_band_pass,
}

FILTER_NAMES = tuple(_CATALOG)


def named_filter(name: str) -> FilterFn:
    """Look up a closed-form response from the built-in catalog (see ``FILTER_NAMES``)."""
    try:
        return FilterFn(name, _CATALOG[name])
    except KeyError:
        raise FilterError(f"unknown filter {name!r}; choose from {', '.join(FILTER_NAMES)}") from None
