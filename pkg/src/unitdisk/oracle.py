"""Brute-force references used by the tests.

Nothing here uses spatial structures: adjacency comes from the full
all-pairs distance matrix and separation from exhaustive subset search.
"""
from __future__ import annotations

from collections import deque
from itertools import combinations

import numpy as np

from .errors import IndexOutOfRange, TooLarge
from .sep_generic import INFEASIBLE, SeparationAnswer, check_terminals, is_separating
from .sssp import NO_PARENT, UNREACHED, ShortestPathResult

MAX_SUBSET_POINTS = 20


def all_pairs_adjacency(points) -> list[list[int]]:
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    dx = pts[:, None, 0] - pts[None, :, 0]
    dy = pts[:, None, 1] - pts[None, :, 1]
    adj = dx * dx + dy * dy <= 1.0
    np.fill_diagonal(adj, False)
    return [np.nonzero(row)[0].tolist() for row in adj]


def oracle_sssp(points, root: int, adjacency: list[list[int]] | None = None) -> ShortestPathResult:
    n = len(points)
    if not 0 <= root < n:
        raise IndexOutOfRange(f"root {root} not in 0..{n - 1}")
    adj = all_pairs_adjacency(points) if adjacency is None else adjacency
    dist = [UNREACHED] * n
    parent = [NO_PARENT] * n
    dist[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] == UNREACHED:
                dist[v] = dist[u] + 1
                parent[v] = u
                queue.append(v)
    return ShortestPathResult(root, np.array(dist, dtype=np.int64), np.array(parent, dtype=np.int64))


def oracle_separation(points, tau: float) -> SeparationAnswer:
    """Smallest subset whose disks separate s=(0,0) from t=(0,tau)."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n = len(pts)
    if n > MAX_SUBSET_POINTS:
        raise TooLarge(f"{n} points; exhaustive search is limited to {MAX_SUBSET_POINTS}")
    check_terminals(pts, tau)
    for k in range(1, n + 1):
        for subset in combinations(range(n), k):
            if is_separating(pts[list(subset)], tau):
                return SeparationAnswer(k)
    return INFEASIBLE
