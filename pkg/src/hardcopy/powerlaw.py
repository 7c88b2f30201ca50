"""Discrete power-law fitting at a fixed lower cutoff."""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

GAMMA_BOUNDS = (1.05, 6.0)
MIN_TAIL = 10


class FitError(ValueError):
    """The tail cannot support a power-law fit."""


@dataclass(frozen=True)
class PowerLawFit:
    gamma_hat: float
    k_min: int
    n_tail: int
    log_likelihood: float
    ks_distance: float

    def as_dict(self):
        return {"gamma_hat": self.gamma_hat, "k_min": self.k_min, "n_tail": self.n_tail,
                "log_likelihood": self.log_likelihood, "ks_distance": self.ks_distance}


def _as_counts(data):
    if isinstance(data, Mapping):
        k = np.fromiter(data.keys(), dtype=np.int64)
        c = np.fromiter(data.values(), dtype=np.int64)
    elif hasattr(data, "k") and hasattr(data, "counts"):
        k, c = np.asarray(data.k), np.asarray(data.counts)
    else:
        k, c = np.unique(np.asarray(data, dtype=np.int64), return_counts=True)
    order = np.argsort(k)
    return k[order], c[order]


def log_likelihood(gamma, k, counts, k_min):
    n = counts.sum()
    return -gamma * np.dot(counts, np.log(k)) - n * np.log(zeta(gamma, k_min))


def fit_power_law(data, k_min=10):
    """Maximum-likelihood exponent of ``P(k) = k**-gamma / zeta(gamma, k_min)``, k >= k_min.

    ``data`` may be a histogram object (``.k``/``.counts``), a ``{k: count}``
    mapping, or a raw sample of integers.
    """
    if k_min < 1:
        raise FitError(f"k_min must be >= 1, got {k_min}")
    k, c = _as_counts(data)
    keep = (k >= k_min) & (c > 0)
    k, c = k[keep], c[keep]
    n = int(c.sum())
    if n < MIN_TAIL:
        raise FitError(f"only {n} observations with k >= {k_min}; need {MIN_TAIL}")
    if k.size < 2:
        raise FitError("tail has a single distinct value")

    logk_sum = float(np.dot(c, np.log(k)))

    def nll(g):
        return g * logk_sum + n * np.log(zeta(g, k_min))

    lo, hi = GAMMA_BOUNDS
    res = minimize_scalar(nll, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-7})
    g = float(res.x)
    if min(g - lo, hi - g) < 1e-4:
        raise FitError(f"likelihood maximum not bracketed in {GAMMA_BOUNDS} (got {g:.4f})")

    grid = np.arange(k_min, k[-1] + 1)
    model_cdf = 1 - zeta(g, grid + 1) / zeta(g, k_min)
    emp = np.zeros(grid.shape[0])
    emp[k - k_min] = c
    emp_cdf = np.cumsum(emp) / n
    ks = float(np.max(np.abs(emp_cdf - model_cdf)))
    return PowerLawFit(g, int(k_min), n, float(-res.fun), ks)
