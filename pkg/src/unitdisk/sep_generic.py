"""Minimum separation by scanning every edge of G(P) for every root.

For a shortest-path tree ``T_r`` with crossing parities ``N``, an edge pq
closes a cycle that crosses st an odd number of times iff
``N[p] + N[q] + cr(pq)`` is odd. The optimum is the minimum of
``dist[p] + dist[q] + 1`` over all roots and all such edges.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .delaunay import Triangulation, build_delaunay
from .errors import TerminalCovered
from .geom import NormalizedInstance, crosses_terminal, crosses_terminal_many
from .sssp import NO_PARENT, UNREACHED, ShortestPathResult, sssp_delaunay

NO_PARITY = -1


@dataclass(frozen=True)
class SeparationAnswer:
    """Optimal separation size, or ``size is None`` when infeasible.

    ``root``, ``p`` and ``q`` identify the witness closed walk: tree path
    root -> p, edge pq, tree path q -> root.
    """

    size: int | None
    root: int | None = None
    p: int | None = None
    q: int | None = None

    @property
    def feasible(self) -> bool:
        return self.size is not None

    def __str__(self) -> str:
        if self.size is None:
            return "INFEASIBLE"
        return f"{self.size} (root {self.root}, edge {self.p}-{self.q})"


INFEASIBLE = SeparationAnswer(None)


def check_terminals(points: np.ndarray, tau: float) -> None:
    """Raise TerminalCovered if s=(0,0) or t=(0,tau) is within 1/2 of a center."""
    if len(points) == 0:
        return
    x, y = points[:, 0], points[:, 1]
    ds = x * x + y * y
    dt = x * x + (y - tau) * (y - tau)
    bad = np.nonzero((ds <= 0.25) | (dt <= 0.25))[0]
    if len(bad):
        raise TerminalCovered(f"point {int(bad[0])} covers a terminal")


def compute_parities(spr: ShortestPathResult, points, tau: float) -> np.ndarray:
    """``N[p]`` = crossing parity of the tree path root -> p (int8, -1 if unreached)."""
    pts = np.asarray(points, dtype=np.float64)
    N = np.full(spr.n, NO_PARITY, dtype=np.int8)
    levels = spr.levels()
    if not levels:
        return N
    N[spr.root] = 0
    for level in levels[1:]:
        par = spr.parent[level]
        N[level] = N[par] ^ crosses_terminal_many(pts[level], pts[par], tau)
    return N


def grid_edges(points) -> np.ndarray:
    """All edges of G(P) as ``(m, 2)`` with ``u < v``, via unit grid buckets."""
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) < 2:
        return np.zeros((0, 2), dtype=np.int64)
    cx = np.floor(pts[:, 0]).astype(np.int64)
    cy = np.floor(pts[:, 1]).astype(np.int64)
    buckets: dict[tuple[int, int], list[int]] = defaultdict(list)
    for k, key in enumerate(zip(cx.tolist(), cy.tolist())):
        buckets[key].append(k)
    cells = {key: np.array(v, dtype=np.int64) for key, v in buckets.items()}
    out = []
    # each unordered cell pair once: the cell itself and 4 forward neighbours
    for (gx, gy), a in cells.items():
        for ox, oy in ((0, 0), (1, -1), (1, 0), (1, 1), (0, 1)):
            b = cells.get((gx + ox, gy + oy))
            if b is None:
                continue
            dx = pts[a, None, 0] - pts[None, b, 0]
            dy = pts[a, None, 1] - pts[None, b, 1]
            ii, jj = np.nonzero(dx * dx + dy * dy <= 1.0)
            u, v = a[ii], b[jj]
            if ox == 0 and oy == 0:
                keep = u < v
                u, v = u[keep], v[keep]
            out.append(np.stack([np.minimum(u, v), np.maximum(u, v)], axis=1))
    if not out:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(out)


def separation_generic(
    inst: NormalizedInstance,
    dt: Triangulation | None = None,
    edges: np.ndarray | None = None,
    hints: bool = True,
) -> SeparationAnswer:
    pts = np.asarray(inst.points, dtype=np.float64)
    tau = inst.tau
    check_terminals(pts, tau)
    n = len(pts)
    if n < 3:
        return INFEASIBLE
    if dt is None:
        dt = build_delaunay(pts)
    if edges is None:
        edges = grid_edges(pts)
    if len(edges) == 0:
        return INFEASIBLE
    eu, ev = edges[:, 0], edges[:, 1]
    cr = crosses_terminal_many(pts[eu], pts[ev], tau)
    best = math.inf
    witness = INFEASIBLE
    for r in range(n):
        spr = sssp_delaunay(pts, dt, r, hints=hints)
        N = compute_parities(spr, pts, tau)
        du = spr.dist[eu]
        # both endpoints of an edge are in the same component
        odd = (du != UNREACHED) & ((N[eu] ^ N[ev] ^ cr) == 1)
        if not odd.any():
            continue
        lengths = du + spr.dist[ev] + 1
        cand = np.nonzero(odd)[0]
        k = cand[np.argmin(lengths[cand])]
        if lengths[k] < best:
            best = int(lengths[k])
            witness = SeparationAnswer(best, r, int(eu[k]), int(ev[k]))
    return witness


def _spanning_forest(pts: np.ndarray):
    n = len(pts)
    adj = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            dx = pts[i, 0] - pts[j, 0]
            dy = pts[i, 1] - pts[j, 1]
            if dx * dx + dy * dy <= 1.0:
                adj[i].append(j)
                adj[j].append(i)
    parent = [NO_PARENT] * n
    seen = [False] * n
    order = []
    for r in range(n):
        if seen[r]:
            continue
        seen[r] = True
        stack = [r]
        while stack:
            u = stack.pop()
            order.append(u)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    parent[v] = u
                    stack.append(v)
    return adj, parent, order


def is_separating(subset, tau: float) -> bool:
    """True iff the disks centred at ``subset`` separate s=(0,0) from t=(0,tau).

    Uses an arbitrary spanning forest: separation holds iff some non-forest
    edge closes a cycle with odd crossing parity.
    """
    pts = np.asarray(subset, dtype=np.float64).reshape(-1, 2)
    check_terminals(pts, tau)
    if len(pts) < 3:
        return False
    adj, parent, order = _spanning_forest(pts)
    N = [0] * len(pts)
    for u in order:
        if parent[u] != NO_PARENT:
            N[u] = N[parent[u]] ^ crosses_terminal(pts[u], pts[parent[u]], tau)
    for u in range(len(pts)):
        for v in adj[u]:
            if u < v and parent[u] != v and parent[v] != u:
                if (N[u] + N[v] + crosses_terminal(pts[u], pts[v], tau)) % 2 == 1:
                    return True
    return False


def witness_cycle(points, answer: SeparationAnswer, dt: Triangulation | None = None) -> list[int]:
    """Vertex sequence of the witness closed walk (root first, not repeated)."""
    if not answer.feasible:
        return []
    pts = np.asarray(points, dtype=np.float64)
    if dt is None:
        dt = build_delaunay(pts)
    spr = sssp_delaunay(pts, dt, answer.root)
    down = spr.path_to_root(answer.p)[::-1]
    up = spr.path_to_root(answer.q)
    return down + up[:-1]
