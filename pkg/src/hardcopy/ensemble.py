"""Degree histograms, replicated runs, and theory-vs-simulation diagnostics."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .graph import InvalidParameter, new_initial
from .process import (HardCopyParams, SimulationAborted, evolve, geometric_schedule,
                      make_rng, validate_hard_copy, warn_if_out_of_regime)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DegreeHistogram:
    """Sparse counts: ``counts[i]`` vertices have degree ``k[i]`` (k ascending)."""
    t: int
    k: np.ndarray
    counts: np.ndarray

    def as_dict(self):
        return dict(zip(self.k.tolist(), self.counts.tolist()))

    def __getitem__(self, k):
        i = np.searchsorted(self.k, k)
        return int(self.counts[i]) if i < self.k.size and self.k[i] == k else 0

    @property
    def total(self):
        return int(self.counts.sum())

    def degree_sum(self):
        return int(np.dot(self.k, self.counts))


def degree_histogram(g):
    full = np.bincount(g.degrees())
    k = np.flatnonzero(full)
    return DegreeHistogram(g.t, k, full[k])


def histogram_from_degrees(degrees):
    full = np.bincount(np.asarray(degrees, dtype=np.int64))
    k = np.flatnonzero(full)
    return DegreeHistogram(int(full.sum()), k, full[k])


@dataclass
class CheckpointStats:
    """Across-replica statistics at one time ``t``.

    ``dk_mean[i]`` and ``dk_stderr[i]`` refer to degree ``k[i]`` and are
    statistics of ``D_k(t)/t``.
    """
    t: int
    k: np.ndarray
    dk_mean: np.ndarray
    dk_stderr: np.ndarray
    e_mean: float = float("nan")
    e_stderr: float = float("nan")
    e_var: float = float("nan")
    max_degree_mean: float = float("nan")
    max_degree_stderr: float = float("nan")
    multi_edge_mean: float = float("nan")
    multi_edge_stderr: float = float("nan")

    def dk(self, k):
        i = np.searchsorted(self.k, k)
        if i < self.k.size and self.k[i] == k:
            return float(self.dk_mean[i]), float(self.dk_stderr[i])
        return 0.0, 0.0

    def as_dict(self):
        return {"t": self.t, "e_mean": self.e_mean, "e_stderr": self.e_stderr,
                "e_var": self.e_var, "max_degree_mean": self.max_degree_mean,
                "max_degree_stderr": self.max_degree_stderr,
                "multi_edge_vertices_mean": self.multi_edge_mean,
                "multi_edge_vertices_stderr": self.multi_edge_stderr}


@dataclass
class EnsembleSummary:
    params: HardCopyParams
    R: int
    master_seed: int
    checkpoints: list
    stats: list
    replicas: list = field(default_factory=list, repr=False)

    def at(self, t=None):
        """Statistics at checkpoint ``t`` (default: the last one)."""
        if t is None:
            return self.stats[-1]
        for s in self.stats:
            if s.t == t:
                return s
        raise KeyError(f"no checkpoint at t={t}")

    def per_replica(self, column):
        """Array ``(R, n_checkpoints)`` of a trajectory column."""
        return np.array([getattr(tr, column) for tr in self.replicas], dtype=float)

    def merge(self, other):
        """Pool two ensembles run with the same parameters and checkpoints."""
        if other.params.alpha != self.params.alpha or other.params.m != self.params.m \
                or other.checkpoints != self.checkpoints:
            raise InvalidParameter("can only merge ensembles of the same model and schedule")
        return summarize(self.params, self.master_seed, self.checkpoints,
                         self.replicas + other.replicas)


def _mean_se(x):
    """Mean and standard error along axis 0 (sample std with ddof=1)."""
    n = x.shape[0]
    mean = x.mean(axis=0)
    sd = x.std(axis=0, ddof=1) if n > 1 else np.zeros_like(mean)
    return mean, sd / np.sqrt(n)


def summarize(params, master_seed, checkpoints, replicas):
    """Reduce replica trajectories (in list order) to an :class:`EnsembleSummary`."""
    R = len(replicas)
    stats = []
    for j, t in enumerate(checkpoints):
        hists = [tr.histograms[j] for tr in replicas]
        kmax = max(int(h.k[-1]) for h in hists)
        dense = np.zeros((R, kmax + 1))
        for r, h in enumerate(hists):
            dense[r, h.k] = h.counts / t
        mean, se = _mean_se(dense)
        k = np.flatnonzero(dense.any(axis=0))
        cols = {}
        for name in ("e", "max_degree", "multi_edge_vertices"):
            cols[name] = np.array([getattr(tr, name)[j] for tr in replicas], dtype=float)
        e_mean, e_se = _mean_se(cols["e"])
        d_mean, d_se = _mean_se(cols["max_degree"])
        x_mean, x_se = _mean_se(cols["multi_edge_vertices"])
        stats.append(CheckpointStats(
            t=int(t), k=k, dk_mean=mean[k], dk_stderr=se[k],
            e_mean=float(e_mean), e_stderr=float(e_se),
            e_var=float(cols["e"].var(ddof=1)) if R > 1 else 0.0,
            max_degree_mean=float(d_mean), max_degree_stderr=float(d_se),
            multi_edge_mean=float(x_mean), multi_edge_stderr=float(x_se)))
    return EnsembleSummary(params, R, master_seed, list(checkpoints), stats, list(replicas))


class EnsembleAborted(SimulationAborted):
    def __init__(self, msg, partial):
        super().__init__(msg)
        self.partial = partial


def _replica(params, T, checkpoints, master_seed, r):
    g = new_initial(params.m)
    return evolve(g, params, T, checkpoints, rng=make_rng(master_seed, r), warn=False)


def run_ensemble(params, T, R, checkpoints=None, master_seed=0, threads=1):
    """Run ``R`` independent replicas to time ``T`` and summarize them.

    Replica ``r`` uses ``make_rng(master_seed, r)``; results are reduced in
    replica order, so the summary does not depend on ``threads``.
    """
    if R < 2:
        raise InvalidParameter(f"need at least 2 replicas for standard errors, got R={R}")
    warn_if_out_of_regime(params.alpha, params.m)
    checkpoints = geometric_schedule(T) if checkpoints is None else sorted(set(checkpoints))
    if checkpoints[-1] > T or checkpoints[0] < 2:
        raise InvalidParameter(f"checkpoints must lie in [2, {T}]")
    done = []
    try:
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                futures = [pool.submit(_replica, params, T, checkpoints, master_seed, r)
                           for r in range(R)]
                for f in futures:
                    done.append(f.result())
        else:
            for r in range(R):
                done.append(_replica(params, T, checkpoints, master_seed, r))
    except (SimulationAborted, MemoryError) as exc:
        partial = summarize(params, master_seed, checkpoints, done) if len(done) >= 2 else None
        raise EnsembleAborted(f"ensemble stopped after {len(done)} of {R} replicas: {exc}",
                              partial) from exc
    return summarize(params, master_seed, checkpoints, done)


# -- theory comparison ----------------------------------------------------

@dataclass
class Comparison:
    t: int
    k: np.ndarray
    empirical: np.ndarray
    theory: np.ndarray
    stderr: np.ndarray
    z: np.ndarray
    max_abs_diff: float
    m_hat: float
    eps1: float

    def rows(self):
        return list(zip(self.k.tolist(), self.empirical.tolist(), self.theory.tolist(),
                        self.stderr.tolist(), self.z.tolist()))


def compare_to_theory(summary, theory, k_range=None, eps1=None):
    """Per-degree z-scores of empirical ``D_k/t`` against ``d_k``.

    ``m_hat = max_k |mean D_k(t) - t d_k| / t**(1 - eps1)`` is the smallest
    constant consistent with the observed deviations at this ``t``.
    ``summary`` is an :class:`EnsembleSummary` (last checkpoint used) or a
    :class:`CheckpointStats`.
    """
    stats = summary.at() if isinstance(summary, EnsembleSummary) else summary
    if k_range is None:
        k_range = (theory.m, min(theory.k_max, int(stats.k[-1]) if stats.k.size else theory.m))
    lo, hi = k_range
    ks = np.arange(lo, hi + 1)
    emp = np.empty(ks.size)
    se = np.empty(ks.size)
    th = np.array([theory[int(k)] for k in ks])
    for i, k in enumerate(ks):
        emp[i], se[i] = stats.dk(int(k))
    diff = emp - th
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(diff == 0, 0.0, diff / se)
    if eps1 is None:
        eps1 = analytic.default_epsilons(theory.alpha, theory.m).epsilon1
    t = stats.t
    m_hat = float(np.max(np.abs(diff)) * t / t ** (1 - eps1))
    return Comparison(t, ks, emp, th, se, z, float(np.max(np.abs(diff))), m_hat, eps1)


# -- bound diagnostics ----------------------------------------------------

@dataclass
class DiagnosticReport:
    rows: list
    violations: dict

    @property
    def ok(self):
        return not any(self.violations.values())


def qs_diagnostics(trajectory, params, eps0=None, t_min=100):
    """Check each checkpoint with ``t >= t_min`` against the growth envelopes.

    Envelopes (unit constants): max degree ``t^(a/2+m(1-a)) log(t)^3``;
    multi-edge vertices ``t^(a/2+m(1-a)+eps0)``; edges ``t log(t)^6``;
    ``|e - mu t| <= t^(1/2+eps0+m(1-a))``. Checks whose hypotheses fail for
    these parameters are reported as None. Violations are logged, not raised.
    """
    alpha, m = params.alpha, params.m
    report = validate_hard_copy(alpha, m)
    if eps0 is None:
        eps0 = (1 - 2 * m * (1 - alpha)) / 4 if report.lemma_regime else None
    conc_ok = report.mu_defined and eps0 is not None and 1 + 2 * eps0 + 2 * m * (1 - alpha) < 2
    rate = analytic.mu(alpha, m) if report.mu_defined else None
    rows = []
    violations = {"max_degree": 0, "multi_edge": 0, "edges": 0, "concentration": 0}
    for t, e, dmax, x, _ in trajectory.rows():
        if t < t_min:
            continue
        row = {"t": t,
               "max_degree": bool(dmax <= analytic.max_degree_envelope(alpha, m, t)),
               "multi_edge": bool(x <= analytic.multi_edge_envelope(alpha, m, t, eps0))
               if eps0 is not None and x >= 0 else None,
               "edges": bool(e <= analytic.crude_edge_envelope(t)),
               "concentration": bool(abs(e - rate * t)
                                     <= analytic.concentration_threshold(alpha, m, eps0, t))
               if conc_ok else None}
        for key in violations:
            if row[key] is False:
                violations[key] += 1
                log.warning("t=%d: %s envelope exceeded", t, key)
        rows.append(row)
    return DiagnosticReport(rows, violations)


@dataclass(frozen=True)
class VarianceFit:
    slope: float | None
    intercept: float | None
    t: tuple
    variance: tuple

    @property
    def degenerate(self):
        return self.slope is None


def variance_growth_fit(points):
    """Least-squares slope of ``log Var(e_t)`` on ``log t``.

    ``points`` is an :class:`EnsembleSummary` (all its checkpoints), or a
    sequence of summaries / :class:`CheckpointStats` / ``(t, var)`` pairs.
    A zero variance makes the fit degenerate (slope None).
    """
    if isinstance(points, EnsembleSummary):
        points = points.stats
    ts, vs = [], []
    for p in points:
        if isinstance(p, EnsembleSummary):
            p = p.at()
        t, v = (p.t, p.e_var) if isinstance(p, CheckpointStats) else p
        ts.append(float(t))
        vs.append(float(v))
    if len(ts) < 2 or len(set(ts)) != len(ts):
        raise InvalidParameter("need at least two distinct times")
    if min(vs) <= 0:
        return VarianceFit(None, None, tuple(ts), tuple(vs))
    slope, intercept = np.polyfit(np.log(ts), np.log(vs), 1)
    return VarianceFit(float(slope), float(intercept), tuple(ts), tuple(vs))


@dataclass(frozen=True)
class SmallTEstimate:
    """Monte Carlo means and standard errors of ``D_k(T)`` and ``e_T``."""
    T: int
    n_runs: int
    dk_mean: np.ndarray      # index k
    dk_stderr: np.ndarray
    e_mean: float
    e_stderr: float


def small_t_monte_carlo(alpha, m, T, n_runs, seed=0):
    """Average ``n_runs`` independent runs to time ``T`` in one compiled loop.

    Uses the same step kernel as :func:`hardcopy.process.evolve`; intended
    for checking the simulator against exact enumeration.
    """
    validate_hard_copy(alpha, m)
    if T < 2 or n_runs < 2:
        raise InvalidParameter("need T >= 2 and n_runs >= 2")
    from . import _kernels as K

    kcap = 2 * m * (T - 1)
    s, sq, es, esq = K.small_t_moments(float(alpha), int(m), int(T), int(n_runs),
                                       make_rng(seed), kcap)
    n = float(n_runs)
    mean = s / n
    var = np.maximum(sq / n - mean ** 2, 0.0) * n / (n - 1)
    e_mean = es / n
    e_var = max(esq / n - e_mean ** 2, 0.0) * n / (n - 1)
    return SmallTEstimate(T, n_runs, mean, np.sqrt(var / n), e_mean, float(np.sqrt(e_var / n)))
