"""Undirected multigraph state for the hard-copy growth process."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels as K


class InvalidParameter(ValueError):
    """Raised for parameters outside a model's domain."""


@dataclass(frozen=True)
class StepDelta:
    """What one time step did.

    ``kind`` is ``"new"`` (a fresh vertex with ``neighbors``) or ``"copy"``
    (a clone of ``target``). ``edges_added`` is the increment of the edge count.
    """
    kind: str
    edges_added: int
    neighbors: tuple[int, ...] = field(default=())
    target: int | None = None


class MultiGraph:
    """Growing multigraph with lineage records.

    Vertices are numbered ``1..t`` in creation order. Storage is a flat edge-slot
    array (each edge contributes its two endpoints), so a uniform slot draw is
    a degree-proportional vertex draw.
    """

    def __init__(self, m, vertex_capacity=64, slot_capacity=None):
        if int(m) != m or m < 1:
            raise InvalidParameter(f"m must be a positive integer, got {m!r}")
        self.m = int(m)
        vcap = max(int(vertex_capacity), 2)
        scap = max(int(slot_capacity or 4 * self.m * vcap), 8 * self.m)
        self._endpoint = np.empty(scap, dtype=np.int64)
        self._next = np.empty(scap, dtype=np.int64)
        self._head = np.empty(vcap, dtype=np.int64)
        self._degree = np.zeros(vcap, dtype=np.int64)
        self._mother = np.empty(vcap, dtype=np.int64)
        self._root = np.empty(vcap, dtype=np.int64)
        self._family = np.zeros(vcap, dtype=np.int64)
        self._meta = np.zeros(3, dtype=np.int64)
        K.init_pair(*self._arrays(), self.m)

    # -- storage ---------------------------------------------------------

    def _arrays(self):
        return (self._endpoint, self._next, self._head, self._degree,
                self._mother, self._root, self._family, self._meta)

    def reserve(self, vertices=0, slots=0):
        """Make room for at least ``vertices`` vertices and ``slots`` edge slots."""
        vcap = self._head.shape[0]
        if vertices > vcap:
            new = max(vertices, 2 * vcap)
            for name in ("_head", "_degree", "_mother", "_root", "_family"):
                old = getattr(self, name)
                arr = np.zeros(new, dtype=np.int64)
                arr[:vcap] = old
                setattr(self, name, arr)
        scap = self._endpoint.shape[0]
        if slots > scap:
            new = max(slots, 2 * scap)
            for name in ("_endpoint", "_next"):
                old = getattr(self, name)
                arr = np.empty(new, dtype=np.int64)
                arr[:scap] = old
                setattr(self, name, arr)

    def _ensure_step_room(self):
        self.reserve(self.t + 1, 2 * (self.e + max(self.max_degree(), self.m)))

    def _check_vertex(self, v):
        if int(v) != v or not 1 <= v <= self.t:
            raise IndexError(f"vertex {v!r} not in 1..{self.t}")
        return int(v) - 1

    # -- mutations -------------------------------------------------------

    def add_vertex_with_edges(self, neighbors):
        """Append an original vertex joined to each id in ``neighbors``.

        Repeated ids become parallel edges. Returns the new vertex id.
        """
        neighbors = list(neighbors)
        if len(neighbors) != self.m:
            raise InvalidParameter(f"expected {self.m} neighbors, got {len(neighbors)}")
        idx = np.array([self._check_vertex(w) for w in neighbors], dtype=np.int64)
        self._ensure_step_room()
        return int(K.new_vertex(*self._arrays(), idx)) + 1

    def copy_vertex(self, target):
        """Append a clone of ``target`` carrying all of its edges (with multiplicity)."""
        i = self._check_vertex(target)
        self._ensure_step_room()
        return int(K.copy_vertex(*self._arrays(), i)) + 1

    # -- queries ---------------------------------------------------------

    @property
    def t(self):
        return int(self._meta[K.T_])

    @property
    def e(self):
        return int(self._meta[K.E_])

    def vertex_count(self):
        return self.t

    def edge_count(self):
        return self.e

    def degree(self, v):
        return int(self._degree[self._check_vertex(v)])

    def degrees(self):
        """Degrees of vertices ``1..t`` as an array (a view; do not mutate)."""
        return self._degree[: self.t]

    def multiplicity(self, u, v):
        i, j = self._check_vertex(u), self._check_vertex(v)
        if i == j:
            return 0
        return int(K.multiplicity(self._endpoint, self._next, self._head, self._degree, i, j))

    def neighbors(self, v):
        """Map neighbour id -> multiplicity."""
        i = self._check_vertex(v)
        out = {}
        j = self._head[i]
        while j != -1:
            w = int(self._endpoint[j ^ 1]) + 1
            out[w] = out.get(w, 0) + 1
            j = self._next[j]
        return out

    def max_degree(self):
        return int(self._meta[K.DMAX_])

    def endpoint_list(self):
        """Vertex ids, each repeated once per incident edge end."""
        return self._endpoint[: 2 * self.e] + 1

    def _scan(self):
        return K.multi_edge_scan(self._endpoint, self._next, self._head, self.t)

    def multi_edge_vertex_count(self):
        """Number of vertices sharing two or more parallel edges with some vertex."""
        return int(self._scan()[0])

    def max_multiplicity(self):
        return int(self._scan()[1])

    def self_loop_count(self):
        return int(self._scan()[2]) // 2

    def invariant_violations(self):
        """Names of structural invariants that do not hold (empty when consistent)."""
        t, e, m = self.t, self.e, self.m
        deg = self.degrees()
        bad = []
        if int(deg.sum()) != 2 * e:
            bad.append("degree_sum")
        if not np.array_equal(np.bincount(self._endpoint[: 2 * e], minlength=t), deg):
            bad.append("endpoint_list")
        if not np.array_equal(K.chain_lengths(self._next, self._head, t), deg):
            bad.append("adjacency")
        _, worst, loops = self._scan()
        if loops:
            bad.append("self_loop")
        if worst > 2 * m:
            bad.append("multiplicity_cap")
        if int(deg.min()) < m:
            bad.append("min_degree")
        if e < m * t:
            bad.append("edge_lower_bound")
        if int(deg.max()) != self.max_degree():
            bad.append("max_degree")
        roots = self._root[:t]
        orig = self._mother[:t] < 0
        if not np.array_equal(roots[orig], np.flatnonzero(orig)) or not orig[roots].all():
            bad.append("family_root")
        if not np.array_equal(np.bincount(roots, minlength=t)[orig], self._family[:t][orig]):
            bad.append("family_size")
        return bad

    # -- lineage ---------------------------------------------------------

    def is_original(self, v):
        return bool(self._mother[self._check_vertex(v)] < 0)

    def mother(self, v):
        """Vertex that ``v`` was copied from, or None for an original vertex."""
        p = int(self._mother[self._check_vertex(v)])
        return None if p < 0 else p + 1

    def family_root(self, v):
        return int(self._root[self._check_vertex(v)]) + 1

    def originals(self):
        return np.flatnonzero(self._mother[: self.t] < 0) + 1

    def descendant_count(self, v):
        """Size of the copy family of original vertex ``v`` (``v`` included)."""
        if not self.is_original(v):
            raise InvalidParameter(f"vertex {v} is a copy; families are rooted at originals")
        return int(self._family[v - 1])

    # -- export ----------------------------------------------------------

    def edge_multiset(self):
        """Arrays ``(u, v, multiplicity)`` with ``u < v``, sorted by ``(u, v)``."""
        ends = self._endpoint[: 2 * self.e].reshape(-1, 2)
        lo = ends.min(axis=1) + 1
        hi = ends.max(axis=1) + 1
        key = lo * (self.t + 1) + hi
        uniq, counts = np.unique(key, return_counts=True)
        return uniq // (self.t + 1), uniq % (self.t + 1), counts

    def write_edges(self, path):
        u, v, c = self.edge_multiset()
        with open(Path(path), "w") as fh:
            fh.write(f"# t={self.t} e={self.e} m={self.m}\n")
            for row in zip(u.tolist(), v.tolist(), c.tolist()):
                fh.write("%d %d %d\n" % row)

    def copy(self):
        g = MultiGraph.__new__(MultiGraph)
        g.m = self.m
        for name in ("_endpoint", "_next", "_head", "_degree",
                     "_mother", "_root", "_family", "_meta"):
            setattr(g, name, getattr(self, name).copy())
        return g

    def __repr__(self):
        return f"MultiGraph(m={self.m}, t={self.t}, e={self.e})"


def new_initial(m):
    """Two vertices joined by ``2m`` parallel edges."""
    return MultiGraph(m)


def read_edges(path):
    """Parse an edge-list export into ``(header, rows)`` where rows are (u, v, mult)."""
    header = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    k, _, val = tok.partition("=")
                    header[k] = int(val)
                continue
            u, v, c = map(int, line.split())
            rows.append((u, v, c))
    return header, rows
