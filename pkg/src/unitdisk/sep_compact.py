"""Near-quadratic minimum separation with compact edge treatment.

Per root, points are split by BFS level i, side of the y-axis and crossing
parity into groups ``L_i^j`` (x < 0) and ``R_i^j`` (x >= 0). An odd edge
between levels i-1 and i closes a walk of length 2i, an odd edge inside
level i one of length 2i+1, so each level probes 18 group pairs:

* same side, different parity: nearest-neighbour index over the second group;
* opposite sides, equal parity, crossing st: :class:`DualIndex` query;
* opposite sides, different parity, missing st: :class:`DualIndex` query.

The levels are produced lazily by :class:`~unitdisk.sssp.LevelGrower`, so
the ``2i < best`` guard and the stop at the first hit for a root also stop
the growth of that root's tree.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .delaunay import Triangulation, build_delaunay
from .dual_index import DualIndex
from .geom import NormalizedInstance, crosses_terminal_many
from .neighbor import NNIndex
from .sep_generic import INFEASIBLE, SeparationAnswer, check_terminals, compute_parities
from .sssp import LevelGrower, ShortestPathResult

SAME, CROSS, MISS = "same", "cross", "miss"

# (kind, (side, parity, level offset), (side, parity, level offset));
# offset 0 is level i, -1 is level i-1. The second group is the indexed one.
EVEN_FAMILIES = (
    (SAME, ("L", 0, 0), ("L", 1, -1)),
    (SAME, ("L", 1, 0), ("L", 0, -1)),
    (SAME, ("R", 0, 0), ("R", 1, -1)),
    (SAME, ("R", 1, 0), ("R", 0, -1)),
    (CROSS, ("L", 0, 0), ("R", 0, -1)),
    (CROSS, ("L", 1, 0), ("R", 1, -1)),
    (CROSS, ("L", 0, -1), ("R", 0, 0)),
    (CROSS, ("L", 1, -1), ("R", 1, 0)),
    (MISS, ("L", 0, 0), ("R", 1, -1)),
    (MISS, ("L", 1, 0), ("R", 0, -1)),
    (MISS, ("L", 0, -1), ("R", 1, 0)),
    (MISS, ("L", 1, -1), ("R", 0, 0)),
)
ODD_FAMILIES = (
    (SAME, ("L", 0, 0), ("L", 1, 0)),
    (SAME, ("R", 0, 0), ("R", 1, 0)),
    (CROSS, ("L", 0, 0), ("R", 0, 0)),
    (CROSS, ("L", 1, 0), ("R", 1, 0)),
    (MISS, ("L", 0, 0), ("R", 1, 0)),
    (MISS, ("L", 1, 0), ("R", 0, 0)),
)


@dataclass
class LevelGroups:
    """Level sets ``W[i]`` and the groups ``groups[i][(side, parity)]``."""

    W: list
    groups: list
    N: np.ndarray

    def group(self, side: str, parity: int, level: int) -> np.ndarray:
        if not 0 <= level < len(self.groups):
            return np.zeros(0, dtype=np.int64)
        return self.groups[level][(side, parity)]


def split_level(level: np.ndarray, points: np.ndarray, N: np.ndarray) -> dict:
    left = points[level, 0] < 0.0
    par = N[level]
    return {
        ("L", 0): level[left & (par == 0)],
        ("L", 1): level[left & (par == 1)],
        ("R", 0): level[~left & (par == 0)],
        ("R", 1): level[~left & (par == 1)],
    }


def build_level_groups(spr: ShortestPathResult, points, tau: float) -> LevelGroups:
    pts = np.asarray(points, dtype=np.float64)
    N = compute_parities(spr, pts, tau)
    W = spr.levels()
    return LevelGroups(W, [split_level(w, pts, N) for w in W], N)


def search_same_side(A, B, nn: NNIndex | None = None):
    """First ``(a_row, b_row)`` with ``dist_sq <= 1``, or None."""
    A = np.asarray(A, dtype=np.float64).reshape(-1, 2)
    if len(A) == 0 or (nn is None and len(B) == 0):
        return None
    if nn is None:
        nn = NNIndex(B)
    w = nn.within_unit_many(A)
    hits = np.nonzero(w >= 0)[0]
    if len(hits) == 0:
        return None
    a = int(hits[0])
    return a, int(nn.ids[w[a]])


class _CrossIndex:
    """DualIndex over the x > 0 part of a right group plus its x == 0 rest."""

    def __init__(self, B: np.ndarray, tau: float):
        self.B = B
        on_axis = B[:, 0] == 0.0
        self.axis_rows = np.nonzero(on_axis)[0]
        pos = np.nonzero(~on_axis)[0]
        self.dual = DualIndex(B[pos], tau, ids=pos)
        self.tau = tau

    def search(self, A: np.ndarray, want_crossing: bool):
        if len(self.dual):
            found = (self.dual.query_crossing_many(A) if want_crossing
                     else self.dual.query_noncrossing_many(A))
            hits = np.nonzero(found >= 0)[0]
            if len(hits):
                a = int(hits[0])
                return a, int(self.dual.ids[found[a]])
        if len(self.axis_rows):
            Z = self.B[self.axis_rows]
            for a in range(len(A)):
                rep = np.repeat(A[a:a + 1], len(Z), axis=0)
                dx = Z[:, 0] - A[a, 0]
                dy = Z[:, 1] - A[a, 1]
                cr = crosses_terminal_many(rep, Z, self.tau).astype(bool)
                ok = (dx * dx + dy * dy <= 1.0) & (cr if want_crossing else ~cr)
                if ok.any():
                    return a, int(self.axis_rows[np.argmax(ok)])
        return None


def search_cross_side(A, B, want_crossing: bool, tau: float, index: _CrossIndex | None = None):
    """First ``(a_row, b_row)`` with ``dist_sq <= 1`` and the requested crossing.

    ``A`` must be left of the axis, ``B`` right of it (x == 0 allowed).
    """
    A = np.asarray(A, dtype=np.float64).reshape(-1, 2)
    if len(A) == 0 or (index is None and len(B) == 0):
        return None
    if index is None:
        index = _CrossIndex(np.asarray(B, dtype=np.float64).reshape(-1, 2), tau)
    return index.search(A, want_crossing)


class _RootSearch:
    """Family probing for one root, with per-group structures cached."""

    def __init__(self, pts, dt, tau, root, hints):
        self.pts = pts
        self.tau = tau
        self.grower = LevelGrower(pts, dt, root, hints=hints)
        self.N = np.full(len(pts), -1, dtype=np.int8)
        self.N[root] = 0
        self.groups = [split_level(np.array([root]), pts, self.N)]
        self._nn = {}
        self._cross = {}

    def grow(self) -> bool:
        W = self.grower.next_level()
        if len(W) == 0:
            return False
        par = self.grower.parent[W]
        self.N[W] = self.N[par] ^ crosses_terminal_many(self.pts[W], self.pts[par], self.tau)
        self.groups.append(split_level(W, self.pts, self.N))
        level = len(self.groups) - 1
        for cache in (self._nn, self._cross):
            for key in [k for k in cache if k[2] < level - 1]:
                del cache[key]
        return True

    def _group(self, side, parity, level):
        return self.groups[level][(side, parity)]

    def probe(self, family, i):
        kind, (sa, ja, oa), (sb, jb, ob) = family
        la, lb = i + oa, i + ob
        A = self._group(sa, ja, la)
        B = self._group(sb, jb, lb)
        if len(A) == 0 or len(B) == 0:
            return None
        key = (sb, jb, lb)
        if kind == SAME:
            nn = self._nn.get(key)
            if nn is None:
                nn = self._nn[key] = NNIndex(self.pts[B], ids=B)
            hit = search_same_side(self.pts[A], None, nn=nn)
            if hit is None:
                return None
            return int(A[hit[0]]), int(hit[1])
        idx = self._cross.get(key)
        if idx is None:
            idx = self._cross[key] = _CrossIndex(self.pts[B], self.tau)
        hit = search_cross_side(self.pts[A], None, kind == CROSS, self.tau, index=idx)
        if hit is None:
            return None
        return int(A[hit[0]]), int(B[hit[1]])


def root_min_walk(pts, dt, tau, root, best, early_exit=True, hints=True):
    """Shortest odd walk through ``root`` found by the family search.

    Returns ``(length, p, q)`` or None. With ``early_exit`` the search stops
    at level i once ``2i >= best`` or as soon as an edge is found.
    """
    search = _RootSearch(pts, dt, tau, root, hints)
    result = None
    i = 1
    while True:
        if early_exit and not 2 * i < best:
            break
        if not search.grow():
            break
        for length, families in ((2 * i, EVEN_FAMILIES), (2 * i + 1, ODD_FAMILIES)):
            for fam in families:
                hit = search.probe(fam, i)
                if hit is None:
                    continue
                if result is None or length < result[0]:
                    result = (length, hit[0], hit[1])
                if early_exit:
                    # even lengths are probed first, so this is the
                    # shortest walk through the root
                    return result
        i += 1
    return result


def separation_compact(
    inst: NormalizedInstance,
    dt: Triangulation | None = None,
    early_exit: bool = True,
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
    best = n + 1
    witness = INFEASIBLE
    for r in range(n):
        found = root_min_walk(pts, dt, tau, r, best, early_exit=early_exit, hints=hints)
        if found is not None and found[0] < best:
            best = found[0]
            witness = SeparationAnswer(best, r, found[1], found[2])
    return witness


def family_of_edge(p: int, q: int, dist, N, points, tau: float):
    """Families ``(i, "even"|"odd", k)`` that can discover the odd edge pq.

    Returns None if pq is not odd or unreached. Used to audit that the
    family lists cover every odd edge exactly once.
    """
    pts = np.asarray(points, dtype=np.float64)
    if dist[p] < 0 or dist[q] < 0:
        return None
    cr = int(crosses_terminal_many(pts[[p]], pts[[q]], tau)[0])
    if (int(N[p]) + int(N[q]) + cr) % 2 == 0:
        return None
    matches = []
    for p0, q0 in ((p, q), (q, p)):
        for i in range(1, max(dist[p], dist[q]) + 1):
            for cls, fams in (("even", EVEN_FAMILIES), ("odd", ODD_FAMILIES)):
                for k, (kind, (sa, ja, oa), (sb, jb, ob)) in enumerate(fams):
                    side_a = "L" if pts[p0, 0] < 0 else "R"
                    side_b = "L" if pts[q0, 0] < 0 else "R"
                    if (side_a, int(N[p0]), i + oa) != (sa, ja, dist[p0]):
                        continue
                    if (side_b, int(N[q0]), i + ob) != (sb, jb, dist[q0]):
                        continue
                    if kind == CROSS and not cr or kind == MISS and cr:
                        continue
                    matches.append((i, cls, k))
    return matches
