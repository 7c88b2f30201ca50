"""Compiled inner loops shared by the graph, the step rules and the ensembles.

The multigraph lives in flat int64 arrays:

- ``endpoint[j]`` is the vertex owning edge slot ``j``; slots ``2i`` and
  ``2i+1`` are the two ends of edge ``i``, so ``endpoint[:2e]`` is the
  degree-weighted vertex list used for preferential sampling.
- ``next_slot[j]`` chains the slots of one vertex, starting at ``head[v]``.
- ``meta = [t, e, max_degree]``.

Vertex indices are 0-based here; the public API is 1-based.
"""
import numba
import numpy as np

T_, E_, DMAX_ = 0, 1, 2
NEW, COPY = 0, 1

_jit = numba.njit(cache=True, nogil=True)


@_jit
def add_edge(endpoint, next_slot, head, degree, meta, u, w):
    s = 2 * meta[E_]
    endpoint[s] = u
    endpoint[s + 1] = w
    next_slot[s] = head[u]
    head[u] = s
    next_slot[s + 1] = head[w]
    head[w] = s + 1
    meta[E_] += 1
    degree[u] += 1
    degree[w] += 1
    if degree[u] > meta[DMAX_]:
        meta[DMAX_] = degree[u]
    if degree[w] > meta[DMAX_]:
        meta[DMAX_] = degree[w]


@_jit
def init_pair(endpoint, next_slot, head, degree, mother, root, family, meta, m):
    meta[T_] = 2
    meta[E_] = 0
    meta[DMAX_] = 0
    for v in range(2):
        head[v] = -1
        degree[v] = 0
        mother[v] = -1
        root[v] = v
        family[v] = 1
    for _ in range(2 * m):
        add_edge(endpoint, next_slot, head, degree, meta, 0, 1)


@_jit
def new_vertex(endpoint, next_slot, head, degree, mother, root, family, meta, neighbors):
    v = meta[T_]
    head[v] = -1
    degree[v] = 0
    mother[v] = -1
    root[v] = v
    family[v] = 1
    meta[T_] += 1
    for w in neighbors:
        add_edge(endpoint, next_slot, head, degree, meta, v, w)
    return v


@_jit
def copy_vertex(endpoint, next_slot, head, degree, mother, root, family, meta, target):
    v = meta[T_]
    head[v] = -1
    degree[v] = 0
    mother[v] = target
    root[v] = root[target]
    family[v] = 0
    family[root[target]] += 1
    meta[T_] += 1
    j = head[target]
    while j != -1:
        # new slots are prepended to the neighbour's chain, never to target's
        add_edge(endpoint, next_slot, head, degree, meta, v, endpoint[j ^ 1])
        j = next_slot[j]
    return v


@_jit
def sample_pa(endpoint, meta, rng):
    return endpoint[rng.integers(0, 2 * meta[E_])]


@_jit
def step(endpoint, next_slot, head, degree, mother, root, family, meta,
         alpha, m, rng, buf):
    """One transition. Returns (kind, edges_added, target); ``buf`` receives
    the m preferential neighbours of a NEW step."""
    if rng.random() < alpha:
        # all m draws see the pre-step endpoint list
        for i in range(m):
            buf[i] = sample_pa(endpoint, meta, rng)
        new_vertex(endpoint, next_slot, head, degree, mother, root, family, meta, buf[:m])
        return NEW, m, -1
    target = rng.integers(0, meta[T_])
    a = degree[target]
    copy_vertex(endpoint, next_slot, head, degree, mother, root, family, meta, target)
    return COPY, a, target


@_jit
def run(endpoint, next_slot, head, degree, mother, root, family, meta,
        alpha, m, rng, t_stop):
    """Step until ``t == t_stop`` or the arrays might overflow on the next
    step; the caller grows them and calls again."""
    buf = np.empty(m, dtype=np.int64)
    vcap = degree.shape[0]
    scap = endpoint.shape[0]
    while meta[T_] < t_stop:
        if meta[T_] + 1 > vcap or 2 * (meta[E_] + max(meta[DMAX_], m)) > scap:
            break
        step(endpoint, next_slot, head, degree, mother, root, family, meta,
             alpha, m, rng, buf)
    return meta[T_]


@_jit
def multiplicity(endpoint, next_slot, head, degree, u, w):
    if degree[w] < degree[u]:
        u, w = w, u
    c = 0
    j = head[u]
    while j != -1:
        if endpoint[j ^ 1] == w:
            c += 1
        j = next_slot[j]
    return c


@_jit
def multi_edge_scan(endpoint, next_slot, head, t):
    """Return (number of vertices with a parallel edge, largest pair multiplicity,
    number of self-loop slots)."""
    count = np.zeros(t, dtype=np.int64)
    stamp = np.full(t, -1, dtype=np.int64)
    n_multi = 0
    worst = 0
    loops = 0
    for v in range(t):
        has_multi = False
        j = head[v]
        while j != -1:
            w = endpoint[j ^ 1]
            if w == v:
                loops += 1
            if stamp[w] != v:
                stamp[w] = v
                count[w] = 0
            count[w] += 1
            if count[w] >= 2:
                has_multi = True
            if count[w] > worst:
                worst = count[w]
            j = next_slot[j]
        if has_multi:
            n_multi += 1
    return n_multi, worst, loops


@_jit
def small_t_moments(alpha, m, T, n_runs, rng, kcap):
    """Sums and squared sums of D_k(T) and e_T over ``n_runs`` fresh runs."""
    smax = 2 * (2 * m)
    for s in range(2, T):
        smax += 2 * 2 * m * (s - 1)
    endpoint = np.empty(smax, dtype=np.int64)
    next_slot = np.empty(smax, dtype=np.int64)
    head = np.empty(T, dtype=np.int64)
    degree = np.empty(T, dtype=np.int64)
    mother = np.empty(T, dtype=np.int64)
    root = np.empty(T, dtype=np.int64)
    family = np.empty(T, dtype=np.int64)
    meta = np.zeros(3, dtype=np.int64)
    buf = np.empty(m, dtype=np.int64)
    hist = np.zeros(kcap + 1, dtype=np.int64)
    dk_sum = np.zeros(kcap + 1)
    dk_sq = np.zeros(kcap + 1)
    e_sum = 0.0
    e_sq = 0.0
    for _ in range(n_runs):
        init_pair(endpoint, next_slot, head, degree, mother, root, family, meta, m)
        while meta[T_] < T:
            step(endpoint, next_slot, head, degree, mother, root, family, meta,
                 alpha, m, rng, buf)
        hist[:] = 0
        for v in range(T):
            hist[degree[v]] += 1
        for k in range(kcap + 1):
            dk_sum[k] += hist[k]
            dk_sq[k] += hist[k] * hist[k]
        e_sum += meta[E_]
        e_sq += meta[E_] * meta[E_]
    return dk_sum, dk_sq, e_sum, e_sq


@_jit
def kumar_run(out, indeg, n, n_stop, cf, rng):
    """Grow the directed copying model from ``n`` to ``n_stop`` vertices."""
    d = out.shape[1]
    while n < n_stop:
        p = rng.integers(0, n)
        for i in range(d):
            if rng.random() < cf:
                w = rng.integers(0, n)
            else:
                w = out[p, i]
            out[n, i] = w
            indeg[w] += 1
        n += 1
    return n


@_jit
def chain_lengths(next_slot, head, t):
    out = np.zeros(t, dtype=np.int64)
    for v in range(t):
        j = head[v]
        while j != -1:
            out[v] += 1
            j = next_slot[j]
    return out
