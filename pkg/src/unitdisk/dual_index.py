"""Range tree over dual slopes with nearest-neighbour secondary structures.

A point b with ``b.x > 0`` is mapped to ``phi(b) = (b.y / b.x, (b.y - tau) / b.x)``:
the slopes of the lines through b and s = (0, 0), and through b and
t = (0, tau). For a query point a with ``a.x < 0`` the segment ab crosses
the open segment st exactly when ``phi1(a) < phi1(b)`` and
``phi2(a) > phi2(b)``, i.e. when phi(b) lies in the open lower-right
quadrant with apex phi(a). The non-crossing points are the exact
complement: ``phi1(b) <= phi1(a)`` (any phi2), or ``phi1(b) > phi1(a)`` and
``phi2(b) >= phi2(a)``.

The primary tree is balanced on phi1; every primary node keeps its points
sorted by phi2 and an implicit balanced secondary tree over that order.
Each secondary node ``v`` has a canonical subset ``P(v)`` and, built on
first use, an :class:`~unitdisk.neighbor.NNIndex` over the original
coordinates of ``P(v)``. A quadrant query decomposes into O(log^2 m)
canonical subsets, each probed for a point within unit distance.

Buckets of at most ``leaf_size`` points stop the recursion; a partially
covered bucket is resolved by testing its points directly.
"""
from __future__ import annotations

import numpy as np

from .errors import OnAxis, WrongSide
from .geom import phi1, phi2
from .neighbor import NNIndex

DEFAULT_LEAF_SIZE = 8


class _PrimaryNode:
    __slots__ = ("lo", "hi", "sec", "key2", "left", "right", "_nn")

    def __init__(self, lo, hi, sec, key2):
        self.lo = lo
        self.hi = hi
        self.sec = sec  # B rows of this node sorted by (phi2, row)
        self.key2 = key2
        self.left = None
        self.right = None
        self._nn = {}

    @property
    def size(self) -> int:
        return self.hi - self.lo

    def nn(self, points, slo, shi) -> NNIndex:
        idx = self._nn.get((slo, shi))
        if idx is None:
            rows = self.sec[slo:shi]
            idx = NNIndex(points[rows], ids=rows)
            self._nn[(slo, shi)] = idx
        return idx


class DualIndex:
    """Static structure over right-side points answering unit-distance
    crossing / non-crossing emptiness queries from left-side points."""

    def __init__(self, points, tau: float, ids=None, leaf_size: int = DEFAULT_LEAF_SIZE):
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        if np.any(pts[:, 0] <= 0.0):
            raise OnAxis("dual index points must have x > 0")
        self.points = pts
        self.tau = float(tau)
        self.ids = np.arange(len(pts)) if ids is None else np.asarray(ids)
        self.leaf_size = max(1, int(leaf_size))
        self.phi1 = phi1(pts[:, 0], pts[:, 1])
        self.phi2 = phi2(pts[:, 0], pts[:, 1], self.tau)
        rows = np.arange(len(pts))
        self.order = np.lexsort((rows, self.phi1))
        self.key1 = self.phi1[self.order]
        self.root = self._build(0, len(pts)) if len(pts) else None

    def __len__(self) -> int:
        return len(self.points)

    def _build(self, lo, hi) -> _PrimaryNode:
        members = self.order[lo:hi]
        sec = members[np.lexsort((members, self.phi2[members]))]
        node = _PrimaryNode(lo, hi, sec, self.phi2[sec])
        if hi - lo > self.leaf_size:
            mid = (lo + hi) // 2
            node.left = self._build(lo, mid)
            node.right = self._build(mid, hi)
        return node

    def primary_nodes(self):
        stack = [self.root] if self.root is not None else []
        while stack:
            node = stack.pop()
            yield node
            if node.left is not None:
                stack.extend((node.right, node.left))

    def secondary_ranges(self, node: _PrimaryNode):
        """All ``(slo, shi)`` secondary nodes of a primary node."""
        stack = [(0, node.size)]
        while stack:
            slo, shi = stack.pop()
            yield slo, shi
            if shi - slo > self.leaf_size:
                mid = (slo + shi) // 2
                stack.extend(((mid, shi), (slo, mid)))

    # -- predicates ----------------------------------------------------------

    def _predicate(self, rows, a1, a2, crossing):
        """``(len(a1), len(rows))`` matrix of the exact side predicate."""
        cr = (a1[:, None] < self.phi1[None, rows]) & (a2[:, None] > self.phi2[None, rows])
        return cr if crossing else ~cr

    # -- traversal -----------------------------------------------------------

    def _traverse(self, a1, a2, crossing, canonical, partial, active):
        """Decompose each query quadrant into canonical subsets.

        ``canonical(node, slo, shi, act)`` receives fully covered secondary
        ranges; ``partial(rows, act)`` receives buckets whose rows still need
        the exact predicate. ``active(act)`` filters queries still pending.
        """
        if self.root is None or len(a1) == 0:
            return
        leaf = self.leaf_size
        k = np.searchsorted(self.key1, a1, side="right")

        def secondary(node, slo, shi, act, j, prefix):
            act = active(act)
            if not len(act):
                return
            jj = j[act]
            full = jj >= shi if prefix else jj <= slo
            if full.any():
                canonical(node, slo, shi, act[full])
            part = act[(jj > slo) & (jj < shi)]
            if not len(part):
                return
            if shi - slo <= leaf:
                partial(node.sec[slo:shi], part)
                return
            mid = (slo + shi) // 2
            secondary(node, slo, mid, part, j, prefix)
            secondary(node, mid, shi, part, j, prefix)

        def covered(node, act):
            # primary node entirely on the phi1 > a1 side
            j = np.full(len(a1), 0, dtype=np.int64)
            j[act] = np.searchsorted(node.key2, a2[act], side="left")
            # crossing: phi2 < a2 is the prefix [0, j); non-crossing: suffix
            secondary(node, 0, node.size, act, j, crossing)

        def suffix(node, act):
            act = active(act)
            if not len(act):
                return
            kk = k[act]
            full = kk <= node.lo
            if full.any():
                covered(node, act[full])
            part = act[(kk > node.lo) & (kk < node.hi)]
            if not len(part):
                return
            if node.left is None:
                partial(self.order[node.lo:node.hi], part)
                return
            suffix(node.left, part)
            suffix(node.right, part)

        def prefix(node, act):
            act = active(act)
            if not len(act):
                return
            kk = k[act]
            full = kk >= node.hi
            if full.any():
                canonical(node, 0, node.size, act[full])
            part = act[(kk > node.lo) & (kk < node.hi)]
            if not len(part):
                return
            if node.left is None:
                # the suffix descent reaches this same bucket and resolves it
                return
            prefix(node.left, part)
            prefix(node.right, part)

        everyone = np.arange(len(a1))
        if not crossing:
            prefix(self.root, everyone)
        suffix(self.root, everyone)

    def _query_many(self, A, crossing) -> np.ndarray:
        A = np.asarray(A, dtype=np.float64).reshape(-1, 2)
        if np.any(A[:, 0] >= 0.0):
            raise WrongSide("query points must have x < 0")
        found = np.full(len(A), -1, dtype=np.int64)
        if self.root is None or len(A) == 0:
            return found
        a1 = phi1(A[:, 0], A[:, 1])
        a2 = phi2(A[:, 0], A[:, 1], self.tau)
        points = self.points

        def active(act):
            return act[found[act] < 0]

        def canonical(node, slo, shi, act):
            nn = node.nn(points, slo, shi)
            w = nn.within_unit_many(A[act])
            hit = w >= 0
            found[act[hit]] = nn.ids[w[hit]]

        def partial(rows, act):
            dx = A[act, None, 0] - points[None, rows, 0]
            dy = A[act, None, 1] - points[None, rows, 1]
            ok = (dx * dx + dy * dy <= 1.0) & self._predicate(rows, a1[act], a2[act], crossing)
            hit = ok.any(axis=1)
            found[act[hit]] = rows[np.argmax(ok[hit], axis=1)]

        self._traverse(a1, a2, crossing, canonical, partial, active)
        return found

    def query_crossing_many(self, A) -> np.ndarray:
        """Per query row, a B row within unit distance whose segment crosses st, else -1."""
        return self._query_many(A, True)

    def query_noncrossing_many(self, A) -> np.ndarray:
        """Per query row, a B row within unit distance not crossing st, else -1."""
        return self._query_many(A, False)

    def cover(self, a, crossing: bool) -> list[np.ndarray]:
        """The pieces a single query decomposes into (B rows per piece).

        Canonical subsets are returned whole; partially covered buckets are
        returned already filtered by the exact predicate.
        """
        A = np.asarray(a, dtype=np.float64).reshape(1, 2)
        a1 = phi1(A[:, 0], A[:, 1])
        a2 = phi2(A[:, 0], A[:, 1], self.tau)
        pieces = []

        def canonical(node, slo, shi, act):
            pieces.append(node.sec[slo:shi].copy())

        def partial(rows, act):
            pieces.append(rows[self._predicate(rows, a1, a2, crossing)[0]])

        self._traverse(a1, a2, crossing, canonical, partial, lambda act: act)
        return pieces


def build_dual_index(B, tau: float, ids=None, leaf_size: int = DEFAULT_LEAF_SIZE) -> DualIndex:
    return DualIndex(B, tau, ids=ids, leaf_size=leaf_size)


def _single(idx: DualIndex, a, tau: float, crossing: bool):
    if float(tau) != idx.tau:
        raise ValueError(f"index was built for tau={idx.tau}, queried with tau={tau}")
    if float(a[0]) >= 0.0:
        raise WrongSide("query point must have x < 0")
    row = idx._query_many(np.asarray(a, dtype=np.float64).reshape(1, 2), crossing)[0]
    return None if row < 0 else int(idx.ids[row])


def query_crossing(idx: DualIndex, a, tau: float):
    """Id of some b with |ab| <= 1 whose segment crosses st, or None."""
    return _single(idx, a, tau, True)


def query_noncrossing(idx: DualIndex, a, tau: float):
    """Id of some b with |ab| <= 1 whose segment misses st, or None."""
    return _single(idx, a, tau, False)


def phi(p, tau: float) -> tuple[float, float]:
    x, y = float(p[0]), float(p[1])
    if x == 0.0:
        raise OnAxis("phi is undefined on the y-axis")
    return phi1(x, y), phi2(x, y, tau)
