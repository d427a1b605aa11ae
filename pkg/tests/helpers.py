"""Shared instance builders and invariant checks for the test suite."""
from __future__ import annotations

import numpy as np

from unitdisk.datagen import generate, make_domain
from unitdisk.geom import crosses_terminal_many, normalize
from unitdisk.sssp import NO_PARENT, UNREACHED

TRIANGLE = np.array([[0.4763, 0.275], [-0.4763, 0.275], [0.0, -0.55]])
TRIANGLE_TAU = 5.0
PATH3 = np.array([[0.0, 0.0], [0.9, 0.0], [1.8, 0.0]])


def uniform_points(rng, n, width=4.0, height=1.0) -> np.ndarray:
    return rng.uniform((0.0, 0.0), (width, height), size=(n, 2))


def uncovered_points(rng, n, tau, radius, tries=1000) -> np.ndarray:
    """n points uniform in a disk around the middle of st, none covering s or t."""
    out = []
    centre = np.array([0.0, tau / 2])
    for _ in range(tries):
        if len(out) == n:
            break
        k = 4 * (n - len(out)) + 8
        r = radius * np.sqrt(rng.uniform(size=k))
        a = rng.uniform(0, 2 * np.pi, size=k)
        p = centre + np.stack([r * np.cos(a), r * np.sin(a)], axis=1)
        ok = (p[:, 0] ** 2 + p[:, 1] ** 2 > 0.25) & (p[:, 0] ** 2 + (p[:, 1] - tau) ** 2 > 0.25)
        out.extend(p[ok][: n - len(out)].tolist())
    return np.array(out).reshape(-1, 2)


def separation_instance(seed: int, n: int):
    """Seeded normalized instance with uncovered terminals.

    Even seeds come from hole domains (s in a hole), odd seeds from a disk
    around st, so both feasible and infeasible answers appear.
    """
    rng = np.random.default_rng(seed)
    if seed % 2 == 0:
        style, w, h = [("large1", 8, 2), ("large1", 12, 3), ("large4", 16, 4)][(seed // 2) % 3]
        inst = generate(make_domain(style, w, h), n, seed)
        return normalize(inst.points, inst.s, inst.t)
    tau = float(rng.uniform(1.2, 4.0))
    radius = float(rng.uniform(1.0, 3.5))
    pts = uncovered_points(rng, n, tau, radius)
    return normalize(pts, (0.0, 0.0), (0.0, tau))


def check_spr_invariants(spr, points) -> None:
    """dist/parent consistency; dist dropping by one along every parent
    pointer also rules out cycles, so the pointers form a tree."""
    pts = np.asarray(points)
    dist, parent, root = spr.dist, spr.parent, spr.root
    assert dist[root] == 0 and parent[root] == NO_PARENT
    reached = dist != UNREACHED
    assert np.all(parent[~reached] == NO_PARENT)
    child = np.nonzero(reached)[0]
    child = child[child != root]
    par = parent[child]
    assert np.all(par != NO_PARENT)
    assert np.all(dist[par] == dist[child] - 1)
    dx = pts[child, 0] - pts[par, 0]
    dy = pts[child, 1] - pts[par, 1]
    assert np.all(dx * dx + dy * dy <= 1.0)


def tree_path(parent, p) -> list[int]:
    out = [int(p)]
    while parent[out[-1]] != NO_PARENT:
        out.append(int(parent[out[-1]]))
    return out


def closed_walk_parity(points, parent, p, q, tau) -> int:
    """Crossing parity of root -> p, p -> q, q -> root walked segment by segment."""
    walk = tree_path(parent, p)[::-1] + tree_path(parent, q)
    P = np.asarray(points)[walk]
    return int(crosses_terminal_many(P[:-1], P[1:], tau).sum() % 2)


def ring_instance(seed: int, n: int):
    """Small instance: jittered ring around s or t plus a few stray points."""
    rng = np.random.default_rng(seed)
    tau = float(rng.uniform(1.5, 4.0))
    cy = 0.0 if seed % 2 else tau
    pts = []
    while len(pts) < n:
        if rng.uniform() < 0.9:
            r, a = rng.uniform(0.55, 0.8), rng.uniform(0, 2 * np.pi)
            p = (r * np.cos(a), cy + r * np.sin(a))
        else:
            p = tuple(rng.uniform((-2.0, -1.0), (2.0, tau + 1.0)))
        if p[0] ** 2 + p[1] ** 2 > 0.25 and p[0] ** 2 + (p[1] - tau) ** 2 > 0.25:
            pts.append(p)
    return normalize(np.array(pts).reshape(-1, 2), (0.0, 0.0), (0.0, tau))
