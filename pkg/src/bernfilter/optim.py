"""Adam over named numpy parameters, with per-parameter learning rates."""
from __future__ import annotations

from typing import Mapping

import numpy as np


class Adam:
    """Bias-corrected Adam. Parameters are updated in place.

    ``lr`` is either one float or a mapping from parameter name to rate, which
    is how parameter groups are expressed.
    """

    def __init__(self, lr: float | Mapping[str, float] = 0.01, betas=(0.9, 0.999), eps: float = 1e-8):
        self.lr = lr
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.t = 0
        self._m: dict[str, np.ndarray] = {}
        self._v: dict[str, np.ndarray] = {}

    def _rate(self, name: str) -> float:
        return self.lr[name] if isinstance(self.lr, Mapping) else self.lr

    def step(self, params: Mapping[str, np.ndarray], grads: Mapping[str, np.ndarray]) -> None:
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        for name, g in grads.items():
            m = self._m.setdefault(name, np.zeros_like(g))
            v = self._v.setdefault(name, np.zeros_like(g))
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            params[name] -= self._rate(name) * (m / c1) / (np.sqrt(v / c2) + self.eps)
