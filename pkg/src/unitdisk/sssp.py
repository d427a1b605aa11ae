"""Shortest-path trees in the unit disk graph G(P).

Three interchangeable algorithms with identical distance output:

* :func:`sssp_delaunay`: grows level ``W_i`` from ``W_{i-1}`` by walking
  Delaunay edges and testing each candidate against a nearest-neighbour
  index over ``W_{i-1}``. O(n log n) per root.
* :func:`sssp_explicit_bfs`: materialises every edge once, then BFS.
* :func:`sssp_grid`: BFS over unit grid cells, scanning the 3x3 block.
"""
from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass

import numpy as np

from .delaunay import Triangulation
from .errors import IndexOutOfRange
from .geom import as_points, dist_sq_many
from .neighbor import NNIndex

UNREACHED = -1
NO_PARENT = -1


@dataclass
class ShortestPathResult:
    root: int
    dist: np.ndarray
    parent: np.ndarray

    @property
    def n(self) -> int:
        return len(self.dist)

    def reached(self) -> np.ndarray:
        return self.dist != UNREACHED

    def levels(self) -> list[np.ndarray]:
        """``W_0, W_1, ...`` as index arrays."""
        reached = np.nonzero(self.dist != UNREACHED)[0]
        if len(reached) == 0:
            return []
        d = self.dist[reached]
        order = np.argsort(d, kind="stable")
        bounds = np.searchsorted(d[order], np.arange(int(d.max()) + 2))
        return [reached[order[bounds[i]:bounds[i + 1]]] for i in range(len(bounds) - 1)]

    def path_to_root(self, p: int) -> list[int]:
        path = [p]
        while self.parent[path[-1]] != NO_PARENT:
            path.append(int(self.parent[path[-1]]))
        return path


def _check_root(n: int, root: int) -> None:
    if not 0 <= root < n:
        raise IndexOutOfRange(f"root {root} not in 0..{n - 1}")


class LevelGrower:
    """Computes BFS levels of G(P) one at a time using DT(P).

    ``next_level()`` returns ``W_i`` for i = 1, 2, ... and an empty array
    once the component of the root is exhausted. ``dist`` and ``parent``
    are filled in as levels are produced, so a caller may stop early.
    """

    def __init__(self, points: np.ndarray, dt: Triangulation, root: int, hints: bool = True):
        n = len(points)
        _check_root(n, root)
        self.points = points
        self.dt = dt
        self.hints = hints
        self.root = root
        self.dist = np.full(n, UNREACHED, dtype=np.int64)
        self.parent = np.full(n, NO_PARENT, dtype=np.int64)
        self.dist[root] = 0
        self.i = 0
        self.current = np.array([root], dtype=np.int64)
        # last level at which a candidate was rejected; its nearest point in
        # W_{i-1} cannot change during level i, so it is never retested
        self._rejected_at = np.full(n, -1, dtype=np.int64)

    def _expand(self, sources: np.ndarray):
        indptr, indices = self.dt.indptr, self.dt.indices
        starts = indptr[sources]
        counts = indptr[sources + 1] - starts
        total = int(counts.sum())
        if total == 0:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        offsets = np.repeat(starts - np.cumsum(counts) + counts, counts)
        cand = indices[offsets + np.arange(total)]
        src = np.repeat(sources, counts)
        return cand, src

    def next_level(self) -> np.ndarray:
        prev = self.current
        if len(prev) == 0:
            return prev
        i = self.i + 1
        pts = self.points
        dist, parent = self.dist, self.parent
        nn = NNIndex(pts[prev])
        new_parts = []
        queue = prev
        from_prev = True
        while len(queue):
            cand, src = self._expand(queue)
            fresh = (dist[cand] == UNREACHED) & (self._rejected_at[cand] != i)
            cand, src = cand[fresh], src[fresh]
            if len(cand) == 0:
                break
            cand, first = np.unique(cand, return_index=True)
            src = src[first]
            hint_bound = 1.0
            if self.hints:
                # hint: q itself when q is in W_{i-1}, else its parent
                anchor = src if from_prev else parent[src]
                hd2 = dist_sq_many(pts[anchor], pts[cand])
                hint_bound = float(np.sqrt(np.minimum(hd2, 1.0).max()))
            w = nn.within_unit_many(pts[cand], hint_bound)
            ok = w >= 0
            acc = cand[ok]
            dist[acc] = i
            parent[acc] = prev[w[ok]]
            self._rejected_at[cand[~ok]] = i
            new_parts.append(acc)
            queue = acc
            from_prev = False
        level = np.concatenate(new_parts) if new_parts else np.zeros(0, dtype=np.int64)
        self.i = i
        self.current = level
        return level

    def result(self) -> ShortestPathResult:
        return ShortestPathResult(self.root, self.dist, self.parent)


def sssp_delaunay(points, dt: Triangulation, root: int, hints: bool = True) -> ShortestPathResult:
    pts = np.asarray(points, dtype=np.float64)
    grower = LevelGrower(pts, dt, root, hints=hints)
    while len(grower.next_level()):
        pass
    return grower.result()


@dataclass(frozen=True)
class ExplicitGraph:
    """All edges of G(P) in CSR form (both directions stored)."""

    indptr: np.ndarray
    indices: np.ndarray

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2


def build_explicit_graph(points, chunk: int = 256) -> ExplicitGraph:
    """Test every pair against ``dist_sq <= 1``; two passes to bound memory."""
    pts = as_points(points)
    n = len(pts)
    x, y = pts[:, 0], pts[:, 1]
    deg = np.zeros(n, dtype=np.int64)

    def block(lo, hi):
        dx = x[lo:hi, None] - x[None, :]
        dy = y[lo:hi, None] - y[None, :]
        adj = dx * dx + dy * dy <= 1.0
        adj[np.arange(hi - lo), np.arange(lo, hi)] = False
        return adj

    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        deg[lo:hi] = block(lo, hi).sum(axis=1)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    indices = np.empty(int(indptr[-1]), dtype=np.int32)
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        _, cols = np.nonzero(block(lo, hi))
        indices[indptr[lo]:indptr[hi]] = cols
    return ExplicitGraph(indptr, indices)


def bfs(graph: ExplicitGraph, root: int, max_gather: int = 1 << 22) -> ShortestPathResult:
    """Level-synchronous BFS; the frontier is gathered in bounded chunks."""
    n = graph.n
    _check_root(n, root)
    indptr, indices = graph.indptr, graph.indices
    dist = np.full(n, UNREACHED, dtype=np.int64)
    parent = np.full(n, NO_PARENT, dtype=np.int64)
    dist[root] = 0
    frontier = np.array([root], dtype=np.int64)
    level = 0
    while len(frontier):
        level += 1
        found = []
        deg = indptr[frontier + 1] - indptr[frontier]
        cum = np.cumsum(deg)
        start = 0
        while start < len(frontier):
            base = cum[start - 1] if start else 0
            stop = int(np.searchsorted(cum, base + max_gather, side="right"))
            stop = max(stop, start + 1)
            f = frontier[start:stop]
            counts = deg[start:stop]
            starts = indptr[f]
            total = int(counts.sum())
            if total:
                offsets = np.repeat(starts - np.cumsum(counts) + counts, counts)
                nbr = indices[offsets + np.arange(total)]
                src = np.repeat(f, counts)
                new = dist[nbr] == UNREACHED
                nbr, src = nbr[new], src[new]
                if len(nbr):
                    nbr, first = np.unique(nbr, return_index=True)
                    dist[nbr] = level
                    parent[nbr] = src[first]
                    found.append(nbr.astype(np.int64))
            start = stop
        frontier = np.concatenate(found) if found else np.zeros(0, dtype=np.int64)
    return ShortestPathResult(root, dist, parent)


def sssp_explicit_bfs(points, root: int, graph: ExplicitGraph | None = None) -> ShortestPathResult:
    if graph is None:
        graph = build_explicit_graph(points)
    return bfs(graph, root)


def sssp_grid(points, root: int) -> ShortestPathResult:
    """BFS over unit grid cells; the buckets are rebuilt for every call."""
    pts = np.asarray(points, dtype=np.float64)
    n = len(pts)
    _check_root(n, root)
    xs = pts[:, 0].tolist()
    ys = pts[:, 1].tolist()
    cells = defaultdict(list)
    cell_of = []
    for k in range(n):
        c = (math.floor(xs[k]), math.floor(ys[k]))
        cell_of.append(c)
        if k != root:
            cells[c].append(k)
    dist = [UNREACHED] * n
    parent = [NO_PARENT] * n
    dist[root] = 0
    queue = deque([root])
    while queue:
        p = queue.popleft()
        px, py = xs[p], ys[p]
        cx, cy = cell_of[p]
        dp = dist[p] + 1
        for gx in (cx - 1, cx, cx + 1):
            for gy in (cy - 1, cy, cy + 1):
                bucket = cells.get((gx, gy))
                if not bucket:
                    continue
                keep = []
                for q in bucket:
                    dx = px - xs[q]
                    dy = py - ys[q]
                    if dx * dx + dy * dy <= 1.0:
                        dist[q] = dp
                        parent[q] = p
                        queue.append(q)
                    else:
                        keep.append(q)
                if len(keep) != len(bucket):
                    cells[(gx, gy)] = keep
    return ShortestPathResult(root, np.array(dist, dtype=np.int64), np.array(parent, dtype=np.int64))
