import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import TRIANGLE, TRIANGLE_TAU, ring_instance, separation_instance
from unitdisk.delaunay import build_delaunay
from unitdisk.errors import TerminalCovered
from unitdisk.geom import crosses_terminal, crosses_terminal_many, normalize
from unitdisk.sep_compact import (
    EVEN_FAMILIES,
    ODD_FAMILIES,
    build_level_groups,
    family_of_edge,
    search_cross_side,
    search_same_side,
    separation_compact,
)
from unitdisk.sep_generic import compute_parities, grid_edges, separation_generic, witness_cycle
from unitdisk.sssp import sssp_delaunay


def test_level_groups_example():
    pts = np.array([[-0.5, 1.0], [0.5, 1.0]])
    res = sssp_delaunay(pts, build_delaunay(pts), 0)
    g = build_level_groups(res, pts, 2.0)
    assert res.dist.tolist() == [0, 1] and g.N.tolist() == [0, 1]
    assert g.group("L", 0, 0).tolist() == [0]
    assert g.group("R", 1, 1).tolist() == [1]
    assert sum(len(g.group(s, j, i)) for s in "LR" for j in (0, 1) for i in (0, 1)) == 2
    assert len(g.group("L", 0, 5)) == 0


def test_left_only_groups_have_empty_right_side():
    pts = np.array([[-0.8, 0.5], [-1.5, 0.6], [-1.2, 1.3], [-2.0, 1.0]])
    res = sssp_delaunay(pts, build_delaunay(pts), 0)
    g = build_level_groups(res, pts, 2.0)
    for i in range(len(g.W)):
        assert len(g.group("R", 0, i)) == 0 and len(g.group("R", 1, i)) == 0


@pytest.mark.parametrize("seed", range(6))
def test_group_membership_pointwise(seed):
    inst = separation_instance(seed, 120)
    pts = inst.points
    res = sssp_delaunay(pts, build_delaunay(pts), 0)
    g = build_level_groups(res, pts, inst.tau)
    N = compute_parities(res, pts, inst.tau)
    seen = []
    for i, w in enumerate(g.W):
        parts = []
        for side in "LR":
            for j in (0, 1):
                grp = g.group(side, j, i)
                parts.extend(grp.tolist())
                for p in grp:
                    assert res.dist[p] == i and N[p] == j
                    assert (pts[p, 0] < 0) == (side == "L")
        assert sorted(parts) == sorted(w.tolist())
        seen.extend(parts)
    assert sorted(seen) == np.nonzero(res.dist >= 0)[0].tolist()


def test_axis_points_are_right_side():
    pts = np.array([[-0.5, 1.0], [0.0, 1.2]])
    res = sssp_delaunay(pts, build_delaunay(pts), 0)
    assert build_level_groups(res, pts, 2.0).group("R", 1, 1).tolist() == [1]


def test_same_side_examples():
    assert search_same_side(np.array([[-0.5, 0.0]]), np.array([[-0.5, 0.9]])) == (0, 0)
    assert search_same_side(np.array([[-0.5, 0.0]]), np.array([[-0.5, 2.0]])) is None
    assert search_same_side(np.zeros((0, 2)), np.array([[-0.5, 2.0]])) is None


def test_cross_side_examples():
    A, B = np.array([[-0.4, 1.0]]), np.array([[0.4, 1.0]])
    assert search_cross_side(A, B, True, 2.0) == (0, 0)
    A, B = np.array([[-0.4, 5.0]]), np.array([[0.4, 5.0]])
    assert search_cross_side(A, B, True, 2.0) is None
    assert search_cross_side(A, B, False, 2.0) == (0, 0)
    assert search_cross_side(A, np.zeros((0, 2)), False, 2.0) is None


def test_cross_side_axis_members_scanned():
    A = np.array([[-0.4, 1.0], [-0.4, 3.0]])
    B = np.array([[0.0, 1.0], [0.0, 3.0]])
    assert search_cross_side(A, B, True, 2.0) == (0, 0)
    hit = search_cross_side(A, B, False, 2.0)
    assert hit is not None
    assert crosses_terminal(A[hit[0]], B[hit[1]], 2.0) == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 80), st.integers(0, 80), st.booleans())
def test_searches_match_quadratic_scan(seed, na, nb, want):
    rng = np.random.default_rng(seed)
    tau = 2.0
    A = rng.uniform((-2, -1), (-1e-3, 3), size=(na, 2))
    B = rng.uniform((0, -1), (2, 3), size=(nb, 2))
    if nb:
        B[rng.uniform(size=nb) < 0.1, 0] = 0.0
    A2 = rng.uniform((-2, -1), (-1e-3, 3), size=(nb, 2))
    d2 = ((A[:, None] - B[None]) ** 2).sum(-1) if na and nb else np.zeros((na, nb))
    cr = np.array([[crosses_terminal(a, b, tau) for b in B] for a in A]).reshape(na, nb)
    ok = (d2 <= 1.0) & ((cr == 1) if want else (cr == 0))
    hit = search_cross_side(A, B, want, tau)
    assert (hit is not None) == bool(ok.any())
    if hit is not None:
        assert ok[hit]
    same = ((A[:, None] - A2[None]) ** 2).sum(-1) <= 1.0 if na and nb else np.zeros((na, nb), bool)
    hit = search_same_side(A, A2)
    assert (hit is not None) == bool(same.any())
    if hit is not None:
        assert same[hit]


def test_triangle():
    inst = normalize(TRIANGLE, (0.0, 0.0), (0.0, TRIANGLE_TAU))
    ans = separation_compact(inst)
    assert ans.size == 3
    assert len(witness_cycle(inst.points, ans)) == 3


def test_one_sided_infeasible():
    pts = np.array([[-0.8, 0.5], [-1.5, 0.6], [-1.2, 1.3], [-1.0, 1.9], [-0.7, 1.2]])
    inst = normalize(pts, (0, 0), (0, 2.5))
    assert not separation_compact(inst).feasible
    assert not separation_compact(inst, early_exit=False).feasible


def test_covered_terminal_rejected():
    with pytest.raises(TerminalCovered):
        separation_compact(normalize([(0.2, 0.1), (3, 3), (4, 4)], (0, 0), (0, 3)))


def test_small_inputs_infeasible():
    assert not separation_compact(normalize(np.zeros((0, 2)), (0, 0), (0, 3))).feasible
    assert not separation_compact(normalize([(1.0, 1.0), (1.5, 1.2)], (0, 0), (0, 3))).feasible


@pytest.mark.parametrize("seed", range(20))
def test_agrees_with_generic(seed):
    n = int(np.random.default_rng(seed).integers(3, 150))
    inst = separation_instance(seed, n)
    ref = separation_generic(inst)
    for early in (True, False):
        ans = separation_compact(inst, early_exit=early)
        assert ans.size == ref.size
        if ans.feasible:
            pts, tau = inst.points, inst.tau
            res = sssp_delaunay(pts, build_delaunay(pts), ans.root)
            N = compute_parities(res, pts, tau)
            p, q = ans.p, ans.q
            assert res.dist[p] + res.dist[q] + 1 == ans.size
            assert (N[p] + N[q] + crosses_terminal(pts[p], pts[q], tau)) % 2 == 1


def test_hints_do_not_change_answer():
    inst = ring_instance(23, 14)
    assert separation_compact(inst, hints=False).size == separation_compact(inst).size


def test_family_tables():
    assert len(EVEN_FAMILIES) == 12 and len(ODD_FAMILIES) == 6
    assert len(set(EVEN_FAMILIES)) == 12 and len(set(ODD_FAMILIES)) == 6


@pytest.mark.parametrize("seed", range(6))
def test_every_odd_edge_has_exactly_one_family(seed):
    inst = separation_instance(seed, 90)
    pts, tau = inst.points, inst.tau
    dt = build_delaunay(pts)
    edges = grid_edges(pts)
    cr = crosses_terminal_many(pts[edges[:, 0]], pts[edges[:, 1]], tau)
    for root in range(0, inst.n, 11):
        res = sssp_delaunay(pts, dt, root)
        N = compute_parities(res, pts, tau)
        for (p, q), c in zip(edges, cr):
            fams = family_of_edge(p, q, res.dist, N, pts, tau)
            if res.dist[p] < 0 or (N[p] + N[q] + c) % 2 == 0:
                assert fams is None
                continue
            assert len(fams) == 1
            i, cls, _ = fams[0]
            length = 2 * i if cls == "even" else 2 * i + 1
            assert length == res.dist[p] + res.dist[q] + 1
