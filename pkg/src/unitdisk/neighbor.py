"""Static nearest-neighbour / unit-range search over a point subset.

Small subsets are scanned directly; larger ones go through a k-d tree
(``scipy.spatial.cKDTree``). Answers are always re-validated with the exact
``dist_sq <= 1`` test from :mod:`unitdisk.geom`, so tree rounding can never
change an adjacency decision.
"""
from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptySet
from .geom import as_points, dist_sq_many

BRUTE_FORCE_MAX = 32

# slack on cKDTree distance bounds; exact decisions are re-made afterwards
_SLACK = 1e-9


class NNIndex:
    """Nearest-neighbour index over ``points``.

    ``ids`` optionally carries the caller's identifiers for the rows; query
    methods return local row numbers, use ``ids[row]`` to translate.
    """

    def __init__(self, points, ids=None, brute_force_max: int = BRUTE_FORCE_MAX):
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        if len(pts) == 0:
            raise EmptySet("cannot build a nearest-neighbour index over no points")
        self.base = pts
        self.ids = np.arange(len(pts)) if ids is None else np.asarray(ids)
        self._tree = cKDTree(pts) if len(pts) > brute_force_max else None

    def __len__(self) -> int:
        return len(self.base)

    def nearest(self, p, hint: int | None = None) -> tuple[int, float]:
        """Row of a nearest base point to ``p`` and its squared distance.

        ``hint`` is a row of the index; its distance to ``p`` bounds the
        search radius. The answer does not depend on it.
        """
        q = np.asarray(p, dtype=np.float64).reshape(1, 2)
        if self._tree is None:
            d2 = dist_sq_many(self.base, q)
            j = int(np.argmin(d2))
            return j, float(d2[j])
        bound = np.inf
        if hint is not None:
            hd2 = float(dist_sq_many(self.base[hint], q[0]))
            bound = np.sqrt(hd2) * (1 + _SLACK) + _SLACK
        _, j = self._tree.query(q[0], distance_upper_bound=bound)
        j = int(j)
        if j >= len(self.base):  # cannot happen when the hint is a base row
            _, j = self._tree.query(q[0])
            j = int(j)
        return j, float(dist_sq_many(self.base[j], q[0]))

    def any_within_unit(self, p) -> int | None:
        """Row of some base point with ``dist_sq <= 1`` to ``p``, else None."""
        j = self.within_unit_many(np.asarray(p, dtype=np.float64).reshape(1, 2))[0]
        return None if j < 0 else int(j)

    def within_unit_many(self, P, hint_bound: float = 1.0) -> np.ndarray:
        """For each query row, a nearest base row if it is within unit distance.

        Returns ``-1`` where no base point satisfies ``dist_sq <= 1``.
        ``hint_bound`` (at most 1) must be an upper bound on the nearest
        distance of every query that has a neighbour within unit distance.
        """
        P = np.asarray(P, dtype=np.float64).reshape(-1, 2)
        if len(P) == 0:
            return np.zeros(0, dtype=np.int64)
        if self._tree is None:
            dx = P[:, None, 0] - self.base[None, :, 0]
            dy = P[:, None, 1] - self.base[None, :, 1]
            d2 = dx * dx + dy * dy
            j = np.argmin(d2, axis=1)
            ok = d2[np.arange(len(P)), j] <= 1.0
            return np.where(ok, j, -1).astype(np.int64)
        bound = min(float(hint_bound), 1.0) * (1 + _SLACK) + _SLACK
        _, j = self._tree.query(P, distance_upper_bound=bound)
        j = np.asarray(j, dtype=np.int64)
        found = j < len(self.base)
        out = np.full(len(P), -1, dtype=np.int64)
        if found.any():
            rows = np.nonzero(found)[0]
            exact = dist_sq_many(self.base[j[rows]], P[rows]) <= 1.0
            out[rows[exact]] = j[rows[exact]]
            for r in rows[~exact]:
                out[r] = self._ball_fallback(P[r])
        return out

    def _ball_fallback(self, p) -> int:
        cand = np.asarray(self._tree.query_ball_point(p, 1.0 + 4 * _SLACK), dtype=np.int64)
        if len(cand) == 0:
            return -1
        d2 = dist_sq_many(self.base[cand], p)
        k = int(np.argmin(d2))
        return int(cand[k]) if d2[k] <= 1.0 else -1


def build_nn(points, ids=None) -> NNIndex:
    return NNIndex(as_points(points), ids=ids)


def nearest(idx: NNIndex, p, hint: int | None = None) -> tuple[int, float]:
    return idx.nearest(p, hint)


def any_within_unit(idx: NNIndex, p) -> int | None:
    return idx.any_within_unit(p)
