"""Step rules: hard copying with preferential attachment, and the linear-growth
copying baseline."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels as K
from .graph import InvalidParameter, MultiGraph, StepDelta, new_initial


class RegimeWarning(UserWarning):
    """Simulation requested outside the regime where the limit theory holds."""


class SimulationAborted(RuntimeError):
    """Raised when a run cannot continue; ``trajectory`` holds what was recorded."""

    def __init__(self, msg, trajectory=None):
        super().__init__(msg)
        self.trajectory = trajectory


def make_rng(seed, replica=None):
    """PCG64 generator for ``seed`` or, for ensembles, for ``(seed, replica)``.

    Replica streams are derived by feeding the pair ``[seed, replica]`` to
    :class:`numpy.random.SeedSequence`, whose hash mixing is fixed by numpy.
    """
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise InvalidParameter(f"seed must be a 64-bit unsigned integer, got {seed}")
    entropy = seed if replica is None else [seed, int(replica)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


@dataclass(frozen=True)
class RegimeReport:
    theorem_regime: bool   # 2m(1-alpha) < alpha
    lemma_regime: bool     # 2m(1-alpha) < 1
    mu_defined: bool       # alpha > 1/2

    def as_dict(self):
        return {"theorem_regime": self.theorem_regime,
                "lemma_regime": self.lemma_regime,
                "mu_defined": self.mu_defined}


def _check_alpha_m(alpha, m):
    if not (isinstance(alpha, (int, float, Fraction)) and 0 < alpha <= 1):
        raise InvalidParameter(f"alpha must lie in (0, 1], got {alpha!r}")
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise InvalidParameter(f"m must be a positive integer, got {m!r}")


def validate_hard_copy(alpha, m):
    """Regime flags for ``(alpha, m)``; comparisons are done in exact rationals."""
    _check_alpha_m(alpha, m)
    a = Fraction(alpha)
    drift = 2 * int(m) * (1 - a)
    return RegimeReport(theorem_regime=drift < a, lemma_regime=drift < 1,
                        mu_defined=a > Fraction(1, 2))


@dataclass(frozen=True)
class HardCopyParams:
    alpha: float
    m: int = 1
    seed: int = 0
    steps: int = 2

    def __post_init__(self):
        _check_alpha_m(self.alpha, self.m)
        if int(self.steps) != self.steps or self.steps < 2:
            raise InvalidParameter(f"steps must be an integer >= 2, got {self.steps!r}")
        make_rng(self.seed)  # range check

    @property
    def regime(self):
        return validate_hard_copy(self.alpha, self.m)

    def as_dict(self):
        return {"alpha": self.alpha, "m": self.m, "seed": self.seed, "steps": self.steps}


@dataclass(frozen=True)
class KumarParams:
    copy_factor: float
    out_degree: int = 1
    seed: int = 0
    steps: int = 2

    def __post_init__(self):
        if not 0 < self.copy_factor < 1:
            raise InvalidParameter(f"copy_factor must lie in (0, 1), got {self.copy_factor!r}")
        if int(self.out_degree) != self.out_degree or self.out_degree < 1:
            raise InvalidParameter(f"out_degree must be a positive integer, got {self.out_degree!r}")
        make_rng(self.seed)


def warn_if_out_of_regime(alpha, m):
    report = validate_hard_copy(alpha, m)
    if not report.theorem_regime:
        warnings.warn(
            f"alpha={alpha}, m={m} violates 2m(1-alpha) < alpha; the limit degree "
            "sequence is not predicted here", RegimeWarning, stacklevel=3)
    return report


def sample_pa_neighbor(g: MultiGraph, rng):
    """Vertex ``w`` drawn with probability ``degree(w) / 2e``."""
    return int(K.sample_pa(g._endpoint, g._meta, rng)) + 1


def step_hard_copy(g: MultiGraph, params: HardCopyParams, rng) -> StepDelta:
    """Advance ``g`` by one time step."""
    if g.m != params.m:
        raise InvalidParameter(f"graph built with m={g.m}, params have m={params.m}")
    g._ensure_step_room()
    buf = np.empty(g.m, dtype=np.int64)
    kind, a, target = K.step(*g._arrays(), float(params.alpha), g.m, rng, buf)
    if kind == K.NEW:
        return StepDelta("new", int(a), neighbors=tuple(int(w) + 1 for w in buf))
    return StepDelta("copy", int(a), target=int(target) + 1)


@dataclass
class Trajectory:
    """Checkpoint records of one run. ``eta`` is ``e - mu*t`` (NaN if mu undefined)."""
    t: list = field(default_factory=list)
    e: list = field(default_factory=list)
    max_degree: list = field(default_factory=list)
    multi_edge_vertices: list = field(default_factory=list)
    eta: list = field(default_factory=list)
    histograms: list = field(default_factory=list)

    def __len__(self):
        return len(self.t)

    def rows(self):
        return list(zip(self.t, self.e, self.max_degree, self.multi_edge_vertices, self.eta))


def geometric_schedule(T, start=2):
    """Powers of two from ``start`` (inclusive) up to ``T``, plus ``T`` itself."""
    pts = [start]
    p = 1
    while p <= start:
        p *= 2
    while p < T:
        pts.append(p)
        p *= 2
    if T > start:
        pts.append(T)
    return pts


def _record(g, traj, mu, histograms, multi_edges):
    from .ensemble import degree_histogram  # local: ensemble imports this module

    traj.t.append(g.t)
    traj.e.append(g.e)
    traj.max_degree.append(g.max_degree())
    traj.multi_edge_vertices.append(g.multi_edge_vertex_count() if multi_edges else -1)
    traj.eta.append(g.e - mu * g.t if mu is not None else float("nan"))
    if histograms:
        traj.histograms.append(degree_histogram(g))


def evolve(g: MultiGraph, params: HardCopyParams, until=None, checkpoints=None,
           rng=None, histograms=True, multi_edges=True, warn=True):
    """Run hard-copy steps on ``g`` until it has ``until`` vertices.

    Parameters
    ----------
    until : int, optional
        Target vertex count; defaults to ``params.steps``.
    checkpoints : sequence of int, optional
        Strictly increasing times in ``[g.t, until]`` at which to record
        ``t, e, max_degree, X_t, eta`` (and a degree histogram when
        ``histograms``). Defaults to :func:`geometric_schedule`.
    rng : numpy Generator, optional
        Defaults to ``make_rng(params.seed)``.

    Returns
    -------
    Trajectory
    """
    from .analytic import mu as _mu

    T = params.steps if until is None else int(until)
    if T < g.t:
        raise InvalidParameter(f"cannot evolve backwards: t={g.t} > until={T}")
    if checkpoints is None:
        checkpoints = geometric_schedule(T, start=g.t)
    checkpoints = [int(c) for c in checkpoints]
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise InvalidParameter("checkpoint schedule must be strictly increasing")
    if checkpoints and (checkpoints[0] < g.t or checkpoints[-1] > T):
        raise InvalidParameter(f"checkpoints must lie in [{g.t}, {T}]")
    report = warn_if_out_of_regime(params.alpha, params.m) if warn else params.regime
    mu = _mu(params.alpha, params.m) if report.mu_defined else None
    rng = make_rng(params.seed) if rng is None else rng
    alpha = float(params.alpha)

    traj = Trajectory()
    stops = checkpoints + ([T] if not checkpoints or checkpoints[-1] != T else [])
    try:
        for stop in stops:
            while g.t < stop:
                g._ensure_step_room()
                K.run(*g._arrays(), alpha, g.m, rng, stop)
            if stop in checkpoints:
                _record(g, traj, mu, histograms, multi_edges)
    except MemoryError as exc:
        raise SimulationAborted(f"out of memory at t={g.t}, e={g.e}", traj) from exc
    return traj


def simulate(params: HardCopyParams, checkpoints=None, rng=None, **kw):
    """Fresh graph evolved to ``params.steps``; returns ``(graph, trajectory)``."""
    g = new_initial(params.m)
    traj = evolve(g, params, checkpoints=checkpoints, rng=rng, **kw)
    return g, traj


# -- linear-growth copying baseline ---------------------------------------

@dataclass
class KumarState:
    """Directed copying-model state: ``out[v, i]`` is the i-th out-link of v."""
    out: np.ndarray
    indeg: np.ndarray
    n: int

    @property
    def out_degree(self):
        return self.out.shape[1]

    def reserve(self, n):
        cap = self.out.shape[0]
        if n > cap:
            new = max(n, 2 * cap)
            out = np.empty((new, self.out_degree), dtype=np.int64)
            out[:cap] = self.out
            indeg = np.zeros(new, dtype=np.int64)
            indeg[:cap] = self.indeg
            self.out, self.indeg = out, indeg

    def in_degrees(self):
        return self.indeg[: self.n]


def kumar_bootstrap(d, capacity=None):
    """``d+1`` vertices; every out-link of vertex i points to vertex (i mod (d+1)) + 1."""
    n0 = d + 1
    cap = max(capacity or 0, n0)
    out = np.empty((cap, d), dtype=np.int64)
    indeg = np.zeros(cap, dtype=np.int64)
    for i in range(n0):
        out[i, :] = (i + 1) % n0
        indeg[(i + 1) % n0] += d
    return KumarState(out, indeg, n0)


def step_kumar(state: KumarState, params: KumarParams, rng):
    """Add one vertex with ``d`` out-links; mutates and returns ``state``."""
    state.reserve(state.n + 1)
    state.n = int(K.kumar_run(state.out, state.indeg, state.n, state.n + 1,
                              float(params.copy_factor), rng))
    return state


def run_kumar(params: KumarParams, rng=None):
    """Grow the baseline model to ``params.steps`` vertices."""
    rng = make_rng(params.seed) if rng is None else rng
    state = kumar_bootstrap(params.out_degree, capacity=params.steps)
    if params.steps > state.n:
        state.n = int(K.kumar_run(state.out, state.indeg, state.n, params.steps,
                                  float(params.copy_factor), rng))
    return state
