"""Connected components, intrinsic-metric balls, and bounded connectivity.

Components are computed by breadth-first traversal over open edges so
intrinsic distances come for free; the bulk path delegates labeling to
scipy.sparse.csgraph.  Instrumented configs are traversed edge by edge through
`is_open`, keeping the read log sound.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .percolation import BondConfig


@dataclass
class Cluster:
    """One open cluster: its vertices plus the open edges they induce."""
    root: int                 # smallest vertex id in the cluster
    vertices: np.ndarray      # sorted ascending
    edges: np.ndarray         # open edge ids inside the cluster, sorted

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def surplus(self) -> int:
        """Tree excess: number of independent cycles of the cluster."""
        return len(self.edges) - len(self.vertices) + 1


def component_of(cfg: BondConfig, x: int) -> Cluster:
    """Exact open cluster of x via breadth-first traversal."""
    g = cfg.geometry
    fast = cfg.read_log is None
    mask = cfg.open_mask() if fast else None
    seen = {int(x)}
    frontier = [int(x)]
    edges = set()
    while frontier:
        nxt = []
        for v in frontier:
            eids, others = g.incident_edges(v)
            if fast:
                sel = mask[eids]
                open_eids, open_others = eids[sel], others[sel]
            else:
                pairs = [(e, w) for e, w in zip(eids.tolist(), others.tolist())
                         if cfg.is_open(e)]
                open_eids = [e for e, _ in pairs]
                open_others = [w for _, w in pairs]
            for e, w in zip(open_eids, open_others):
                edges.add(int(e))
                w = int(w)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    verts = np.array(sorted(seen), dtype=np.int64)
    return Cluster(int(verts[0]), verts, np.array(sorted(edges), dtype=np.int64))


class ComponentMap:
    """Label-based view of all open clusters, for bulk statistics.

    `order` ranks clusters by size descending with ties broken by the smallest
    vertex id they contain, matching the sort contract of all_components.
    """

    def __init__(self, cfg: BondConfig):
        g = cfg.geometry
        mask = cfg.open_mask()
        open_ids = np.flatnonzero(mask)
        uv = g.edge_array()[open_ids]
        V = g.num_vertices
        if len(open_ids):
            m = sparse.csr_matrix(
                (np.ones(len(open_ids), dtype=np.int8), (uv[:, 0], uv[:, 1])),
                shape=(V, V))
            _, labels = csgraph.connected_components(m, directed=False)
        else:
            labels = np.arange(V)
        self.cfg = cfg
        self.labels = labels
        self.num_clusters = int(labels.max()) + 1 if V else 0
        self.sizes = np.bincount(labels, minlength=self.num_clusters)
        self.edge_counts = np.bincount(labels[uv[:, 0]], minlength=self.num_clusters) \
            if len(open_ids) else np.zeros(self.num_clusters, dtype=np.int64)
        self.surplus = self.edge_counts - self.sizes + 1
        self._open_ids = open_ids
        self._uv = uv
        # smallest vertex id per label: labels of np.unique's first occurrences
        first = np.full(self.num_clusters, V, dtype=np.int64)
        np.minimum.at(first, labels, np.arange(V, dtype=np.int64))
        self.roots = first
        self.order = np.lexsort((self.roots, -self.sizes))
        self._vert_order = None
        self._vert_ptr = None
        self._edge_order = None
        self._edge_ptr = None

    def _vertex_groups(self):
        if self._vert_order is None:
            self._vert_order = np.argsort(self.labels, kind="stable")
            counts = np.bincount(self.labels, minlength=self.num_clusters)
            self._vert_ptr = np.concatenate([[0], np.cumsum(counts)])
        return self._vert_order, self._vert_ptr

    def _edge_groups(self):
        if self._edge_order is None:
            lab = self.labels[self._uv[:, 0]]
            self._edge_order = np.argsort(lab, kind="stable")
            counts = np.bincount(lab, minlength=self.num_clusters)
            self._edge_ptr = np.concatenate([[0], np.cumsum(counts)])
        return self._edge_order, self._edge_ptr

    def cluster_vertices(self, label: int) -> np.ndarray:
        order, ptr = self._vertex_groups()
        return np.sort(order[ptr[label]:ptr[label + 1]])

    def cluster_edges(self, label: int) -> np.ndarray:
        order, ptr = self._edge_groups()
        return np.sort(self._open_ids[order[ptr[label]:ptr[label + 1]]])

    def cluster(self, label: int) -> Cluster:
        verts = self.cluster_vertices(label)
        return Cluster(int(self.roots[label]), verts, self.cluster_edges(label))


def component_map(cfg: BondConfig) -> ComponentMap:
    return ComponentMap(cfg)


def all_components(cfg: BondConfig) -> list[Cluster]:
    """All open clusters, largest first, ties broken by smallest root id."""
    cm = ComponentMap(cfg)
    return [cm.cluster(int(lab)) for lab in cm.order]


@dataclass
class IntrinsicBall:
    """Vertices within open-path distance k of the center, with exact distances."""
    center: int
    radius: int
    distances: dict[int, int]

    def vertices(self) -> list[int]:
        return sorted(self.distances)

    def boundary(self, k: int | None = None) -> list[int]:
        """Vertices at distance exactly k (defaults to the ball radius)."""
        k = self.radius if k is None else k
        return sorted(v for v, dv in self.distances.items() if dv == k)

    def contains(self, v: int) -> bool:
        return int(v) in self.distances


def intrinsic_ball(cfg: BondConfig, x: int, k: int) -> IntrinsicBall:
    """Exact BFS ball of radius k around x in the open graph."""
    if k < 0:
        raise ValueError(f"radius must be >= 0, got {k!r}")
    g = cfg.geometry
    fast = cfg.read_log is None
    mask = cfg.open_mask() if fast else None
    dist = {int(x): 0}
    frontier = [int(x)]
    depth = 0
    while frontier and depth < k:
        nxt = []
        for v in frontier:
            eids, others = g.incident_edges(v)
            if fast:
                open_others = others[mask[eids]]
            else:
                open_others = [w for e, w in zip(eids.tolist(), others.tolist())
                               if cfg.is_open(e)]
            for w in open_others:
                w = int(w)
                if w not in dist:
                    dist[w] = depth + 1
                    nxt.append(w)
        depth += 1
        frontier = nxt
    return IntrinsicBall(int(x), k, dist)


def connected_within(cfg: BondConfig, x: int, y: int, k: int) -> bool:
    """True iff y lies in the radius-k intrinsic ball of x."""
    if k < 0:
        raise ValueError(f"radius must be >= 0, got {k!r}")
    x, y = int(x), int(y)
    if x == y:
        return True
    return intrinsic_ball(cfg, x, k).contains(y)
