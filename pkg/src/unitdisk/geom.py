"""Geometric primitives for unit disks of radius 1/2.

Two centers are adjacent when their squared distance is at most 1. Every
adjacency decision in the package goes through the same expression
``dx*dx + dy*dy <= 1`` so that the different algorithms agree bit for bit.

After :func:`normalize`, ``s`` is the origin and ``t = (0, tau)``. A point
with ``x < 0`` is on the left side; every other point (including ``x == 0``)
is on the right side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTerminals


def as_points(points) -> np.ndarray:
    """Return ``points`` as a read-only ``(n, 2)`` float64 array."""
    arr = np.array(points, dtype=np.float64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array of points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    arr.flags.writeable = False
    return arr


def dist_sq(p, q) -> float:
    dx = float(p[0]) - float(q[0])
    dy = float(p[1]) - float(q[1])
    return dx * dx + dy * dy


def dist_sq_many(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Row-wise squared distances; same evaluation order as :func:`dist_sq`."""
    dx = P[..., 0] - Q[..., 0]
    dy = P[..., 1] - Q[..., 1]
    return dx * dx + dy * dy


def is_left(p) -> bool:
    return float(p[0]) < 0.0


def phi1(x, y):
    """Slope of the line through (x, y) and s = (0, 0)."""
    return y / x


def phi2(x, y, tau):
    """Slope of the line through (x, y) and t = (0, tau)."""
    return (y - tau) / x


def _cross_left_right(ax, ay, bx, by, tau):
    # a strictly left, b right. For bx > 0 the segment meets x = 0 strictly
    # inside (0, tau) iff the dual slopes are strictly reversed.
    if bx == 0.0:
        return 0.0 < by < tau
    return phi1(ax, ay) < phi1(bx, by) and phi2(ax, ay, tau) > phi2(bx, by, tau)


def crosses_terminal(p, q, tau: float) -> int:
    """Parity bit: 1 iff segment pq crosses the open segment st.

    Uses the half-open side rule (x == 0 counts as right) and treats a
    segment through s or t as not crossing.
    """
    px, py = float(p[0]), float(p[1])
    qx, qy = float(q[0]), float(q[1])
    p_left = px < 0.0
    q_left = qx < 0.0
    if p_left == q_left:
        return 0
    if p_left:
        return int(_cross_left_right(px, py, qx, qy, tau))
    return int(_cross_left_right(qx, qy, px, py, tau))


def crosses_terminal_many(P: np.ndarray, Q: np.ndarray, tau: float) -> np.ndarray:
    """Vectorised :func:`crosses_terminal` over paired rows; returns uint8."""
    P = np.asarray(P, dtype=np.float64).reshape(-1, 2)
    Q = np.asarray(Q, dtype=np.float64).reshape(-1, 2)
    p_left = P[:, 0] < 0.0
    q_left = Q[:, 0] < 0.0
    differ = p_left != q_left
    A = np.where(p_left[:, None], P, Q)
    B = np.where(p_left[:, None], Q, P)
    ax, ay, bx, by = A[:, 0], A[:, 1], B[:, 0], B[:, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        slopes = (phi1(ax, ay) < phi1(bx, by)) & (phi2(ax, ay, tau) > phi2(bx, by, tau))
    on_axis = (0.0 < by) & (by < tau)
    crossing = np.where(bx == 0.0, on_axis, slopes)
    return (differ & crossing).astype(np.uint8)


def polyline_crossing_parity(vertices, tau: float) -> int:
    """Crossing parity of the closed polyline through ``vertices``."""
    total = 0
    k = len(vertices)
    for i in range(k):
        total += crosses_terminal(vertices[i], vertices[(i + 1) % k], tau)
    return total % 2


@dataclass(frozen=True)
class RigidTransform:
    """``p -> R (p - origin)`` with ``R = [[c, -s], [s, c]]``."""

    origin: tuple[float, float]
    cos: float
    sin: float

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        dx = pts[:, 0] - self.origin[0]
        dy = pts[:, 1] - self.origin[1]
        out = np.empty_like(pts)
        out[:, 0] = self.cos * dx - self.sin * dy
        out[:, 1] = self.sin * dx + self.cos * dy
        return out

    def invert(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        out = np.empty_like(pts)
        out[:, 0] = self.cos * pts[:, 0] + self.sin * pts[:, 1] + self.origin[0]
        out[:, 1] = -self.sin * pts[:, 0] + self.cos * pts[:, 1] + self.origin[1]
        return out


@dataclass(frozen=True)
class NormalizedInstance:
    points: np.ndarray
    tau: float
    transform: RigidTransform

    @property
    def n(self) -> int:
        return len(self.points)


def normalize(points, s, t) -> NormalizedInstance:
    """Rotate and translate so that s -> (0, 0) and t -> (0, |st|).

    The rotation is the counterclockwise one taking direction st to +y.
    A pure translation is used when st is already vertical and upward, so
    already-normalized inputs are returned unchanged.
    """
    pts = as_points(points)
    sx, sy = float(s[0]), float(s[1])
    dx, dy = float(t[0]) - sx, float(t[1]) - sy
    tau = math.hypot(dx, dy)
    if tau == 0.0:
        raise DegenerateTerminals("s and t coincide")
    if dx == 0.0 and dy > 0.0:
        c, sn = 1.0, 0.0
    else:
        # R d = (0, tau): R = [[dy, -dx], [dx, dy]] / tau
        c, sn = dy / tau, dx / tau
    transform = RigidTransform((sx, sy), c, sn)
    mapped = transform.apply(pts)
    mapped.flags.writeable = False
    return NormalizedInstance(mapped, tau, transform)
