"""Delaunay triangulation with CSR vertex adjacency (Qhull via scipy)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .errors import DuplicatePoints, IndexOutOfRange
from .geom import as_points


@dataclass(frozen=True)
class Triangulation:
    """Per-vertex adjacency of DT(P) in compressed sparse row form.

    ``indices[indptr[p]:indptr[p + 1]]`` are the neighbours of ``p``.
    ``triangles`` is empty for degenerate (collinear or n < 3) inputs.
    """

    indptr: np.ndarray
    indices: np.ndarray
    triangles: np.ndarray

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    def neighbors(self, p: int) -> np.ndarray:
        if not 0 <= p < self.n:
            raise IndexOutOfRange(f"vertex {p} not in triangulation of {self.n} points")
        return self.indices[self.indptr[p]:self.indptr[p + 1]]

    def edges(self) -> np.ndarray:
        """Undirected edges as an ``(m, 2)`` array with ``u < v``."""
        counts = np.diff(self.indptr)
        u = np.repeat(np.arange(self.n), counts)
        v = self.indices
        keep = u < v
        return np.stack([u[keep], v[keep]], axis=1)


def neighbors(t: Triangulation, p: int) -> np.ndarray:
    return t.neighbors(p)


def _from_edge_list(n: int, u: np.ndarray, v: np.ndarray, triangles) -> Triangulation:
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    if len(src):
        keep = np.ones(len(src), dtype=bool)
        keep[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
        src, dst = src[keep], dst[keep]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return Triangulation(indptr, dst.astype(np.int64), np.asarray(triangles, dtype=np.int64).reshape(-1, 3))


def _check_distinct(pts: np.ndarray) -> None:
    if len(pts) < 2:
        return
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    s = pts[order]
    same = np.all(s[1:] == s[:-1], axis=1)
    if same.any():
        k = int(np.argmax(same))
        raise DuplicatePoints(f"points {order[k]} and {order[k + 1]} coincide")


def _collinear_path(pts: np.ndarray) -> Triangulation:
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    return _from_edge_list(len(pts), order[:-1], order[1:], [])


def build_delaunay(points) -> Triangulation:
    """Build DT(P); collinear input yields the path along the line."""
    pts = as_points(points)
    _check_distinct(pts)
    n = len(pts)
    if n < 3:
        empty = np.zeros(0, dtype=np.int64)
        if n == 2:
            return _from_edge_list(2, np.array([0]), np.array([1]), [])
        return _from_edge_list(n, empty, empty, [])
    try:
        tri = Delaunay(pts)
    except QhullError:
        return _collinear_path(pts)
    if len(tri.coplanar):
        # points dropped by Qhull for precision reasons; joggle so every
        # input point becomes a vertex
        tri = Delaunay(pts, qhull_options="QJ")
    simplices = tri.simplices
    u = np.concatenate([simplices[:, 0], simplices[:, 1], simplices[:, 2]])
    v = np.concatenate([simplices[:, 1], simplices[:, 2], simplices[:, 0]])
    return _from_edge_list(n, u, v, simplices)
