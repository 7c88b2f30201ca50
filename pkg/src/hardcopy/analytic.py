"""Closed forms and recurrences for the hard-copy model.

Logarithms in the bound envelopes are natural logarithms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import InvalidParameter
from .process import validate_hard_copy


def mu(alpha, m):
    """Linear edge-growth rate ``alpha*m / (2*alpha - 1)``; needs alpha > 1/2."""
    if not validate_hard_copy(alpha, m).mu_defined:
        raise InvalidParameter(f"mu is undefined for alpha={alpha} <= 1/2")
    return alpha * m / (2 * alpha - 1)


def asymptotic_exponent(alpha):
    return 1 + 2 * alpha


def kumar_exponent(copy_factor):
    """In-degree exponent ``(2 - c) / (1 - c)`` of the linear-growth copying model."""
    if not 0 < copy_factor < 1:
        raise InvalidParameter(f"copy_factor must lie in (0, 1), got {copy_factor}")
    return (2 - copy_factor) / (1 - copy_factor)


def _require_theorem_regime(alpha, m):
    if not validate_hard_copy(alpha, m).theorem_regime:
        raise InvalidParameter(
            f"alpha={alpha}, m={m} violates 2m(1-alpha) < alpha; no limit degree sequence")


@dataclass(frozen=True)
class TheoreticalSequence:
    """Limit proportions ``d[k]`` for ``k = m..k_max`` (zero below m)."""
    alpha: float
    m: int
    k: np.ndarray
    d: np.ndarray
    mu: float
    exponent: float

    @property
    def k_max(self):
        return int(self.k[-1])

    def __getitem__(self, k):
        if k < self.m:
            return 0.0
        if k > self.k_max:
            raise KeyError(f"k={k} beyond k_max={self.k_max}")
        return float(self.d[k - self.m])

    def scaling_constant(self):
        """``d_k * k**exponent`` at ``k_max``, the running estimate of C in d_k ~ C k^-exponent."""
        return float(self.d[-1]) * self.k_max ** self.exponent

    def tail_mass(self):
        """Continuum estimate of ``sum_{k > k_max} d_k``."""
        c, a = self.scaling_constant(), self.exponent
        return c * (self.k_max + 0.5) ** (1 - a) / (a - 1)

    def mean_degree(self, tail_correction=True):
        s = float(np.dot(self.k.astype(float), self.d))
        if tail_correction:
            c, a = self.scaling_constant(), self.exponent
            s += c * (self.k_max + 0.5) ** (2 - a) / (a - 2)
        return s


def limit_degree_sequence(alpha, m, k_max):
    """Solve ``(k + 2a)/2 d_k = (k-1)/2 d_{k-1} + a [k == m]`` for ``m <= k <= k_max``.

    ``d_m = 2a / (m + 2a)`` and ``d_k = d_{k-1} (k-1)/(k+2a)``, so d_k decays
    like ``k**-(1 + 2a)``.
    """
    _require_theorem_regime(alpha, m)
    if k_max < m:
        raise InvalidParameter(f"k_max={k_max} is below m={m}")
    k = np.arange(m, int(k_max) + 1, dtype=np.int64)
    ratio = np.empty(k.shape[0])
    ratio[0] = 2 * alpha / (m + 2 * alpha)
    kk = k[1:].astype(float)
    ratio[1:] = (kk - 1) / (kk + 2 * alpha)
    # all factors are < 1 and > 0; no underflow before k ~ 1e100
    d = np.cumprod(ratio)
    return TheoreticalSequence(alpha=alpha, m=int(m), k=k, d=d, mu=mu(alpha, m),
                               exponent=asymptotic_exponent(alpha))


@dataclass(frozen=True)
class EdgeGrowth:
    """Exact ``E(e_t)`` for ``t = 2..T``; ``eta = E(e_t) - mu*t`` when mu exists."""
    t: np.ndarray
    expected_e: np.ndarray
    mu: float | None
    eta: np.ndarray | None

    def at(self, t):
        return float(self.expected_e[t - 2])


def expected_edges_exact(alpha, m, T):
    """Iterate ``E(e_{t+1}) = E(e_t) (1 + 2(1-alpha)/t) + alpha*m`` from ``E(e_2) = 2m``."""
    report = validate_hard_copy(alpha, m)
    if T < 2:
        raise InvalidParameter(f"T must be >= 2, got {T}")
    out = np.empty(T - 1)
    e = 2.0 * m
    out[0] = e
    c = 2.0 * (1 - alpha)
    am = alpha * m
    for i, t in enumerate(range(2, T), start=1):
        e = e * (1 + c / t) + am
        out[i] = e
    ts = np.arange(2, T + 1)
    if report.mu_defined:
        rate = mu(alpha, m)
        return EdgeGrowth(ts, out, rate, out - rate * ts)
    return EdgeGrowth(ts, out, None, None)


def deterministic_edge_bound(m, t):
    """Worst case ``2m + sum_{s=2}^{t-1} 2m(s-1)`` from ``Delta_{s+1} <= Delta_s + 2m``."""
    return 2 * m + m * (t - 1) * (t - 2)


def degree_growth_exponent(alpha, m):
    return alpha / 2 + m * (1 - alpha)


def lemma_bounds(alpha, m, s, t):
    """Envelopes for the degree of, and the family size of, the original vertex born at ``s``."""
    if not validate_hard_copy(alpha, m).lemma_regime:
        raise InvalidParameter(f"alpha={alpha}, m={m} violates 2m(1-alpha) < 1")
    if not 2 <= s <= t:
        raise InvalidParameter(f"need 2 <= s <= t, got s={s}, t={t}")
    logt3 = np.log(t) ** 3
    r = t / s
    return {"degree_bound": r ** degree_growth_exponent(alpha, m) * logt3,
            "descendant_bound": r ** (1 - alpha) * logt3}


def max_degree_envelope(alpha, m, t):
    """``t**(alpha/2 + m(1-alpha)) * log(t)**3``."""
    return t ** degree_growth_exponent(alpha, m) * np.log(t) ** 3


def multi_edge_envelope(alpha, m, t, eps):
    """``t**(alpha/2 + m(1-alpha) + eps)``, with unit constant."""
    return t ** (degree_growth_exponent(alpha, m) + eps)


def crude_edge_envelope(t):
    """``t * log(t)**6``, with unit constant."""
    return t * np.log(t) ** 6


def _check_eps0(alpha, m, eps0):
    if not (eps0 > 0 and 1 + 2 * eps0 + 2 * m * (1 - alpha) < 2):
        raise InvalidParameter(
            f"eps0={eps0} must satisfy 0 < eps0 and 1 + 2 eps0 + 2m(1-alpha) < 2")


def concentration_threshold(alpha, m, eps0, t):
    """Deviation scale ``t**(1/2 + eps0 + m(1-alpha))`` for ``|e_t - mu t|``."""
    _check_eps0(alpha, m, eps0)
    return t ** (0.5 + eps0 + m * (1 - alpha))


def variance_exponent_bound(alpha, m, eps0):
    """Exponent ``1 + 2m(1-alpha) + eps0`` bounding the growth of Var(e_t)."""
    _check_eps0(alpha, m, eps0)
    return 1 + 2 * m * (1 - alpha) + eps0


@dataclass(frozen=True)
class Epsilons:
    epsilon0: float
    epsilon1: float


def epsilon1(alpha, m, eps0):
    return 0.5 * min(eps0, 1 - alpha / 2 - m * (1 - alpha), 0.5 - eps0 - m * (1 - alpha))


def default_epsilons(alpha, m):
    """``eps0`` at the midpoint of its feasible interval, and the derived ``eps1``."""
    _require_theorem_regime(alpha, m)
    eps0 = (1 - 2 * m * (1 - alpha)) / 4
    return Epsilons(eps0, epsilon1(alpha, m, eps0))
