import math
import random

import pytest

from pursuit.geodesic import (
    GuardState,
    NearestGuard,
    NoPathError,
    PathSystem,
    RatioGuard,
    SideAssignment,
    guard_point_closest,
    guard_point_ratio,
    shortest_path,
    shortest_path_separating,
)
from pursuit.polyline import PolyPath
from pursuit.region import rect_lake, square_region

from grid_oracle import GridOracle


CENTER_LAKE = square_region(1.0, [rect_lake(0.25, 0.25, 0.75, 0.75)])


def test_convex_region_straight_segment():
    p = shortest_path(square_region(1.0), (0, 0), (1, 1))
    assert p.vertices == ((0.0, 0.0), (1.0, 1.0))
    assert abs(p.length - math.sqrt(2)) < 1e-12


def test_same_endpoint_degenerate():
    p = shortest_path(square_region(1.0), (0.3, 0.3), (0.3, 0.3))
    assert p.is_degenerate and p.length == 0.0


def test_outside_point_rejected():
    with pytest.raises(NoPathError):
        shortest_path(square_region(1.0), (0.1, 0.1), (2.0, 2.0))


def test_path_bends_at_lake_corners():
    p = shortest_path(CENTER_LAKE, (0.0, 0.5), (1.0, 0.5))
    expect = 2 * math.hypot(0.25, 0.25) + 0.5
    assert abs(p.length - expect) < 1e-12
    for v in p.vertices[1:-1]:
        assert v in CENTER_LAKE.lakes[0]


def test_grid_oracle_agreement():
    h = 0.005
    oracle = GridOracle(CENTER_LAKE, h=h)
    cases = [((0.0, 0.5), (1.0, 0.5)), ((0.05, 0.05), (0.95, 0.95)), ((0.1, 0.9), (0.9, 0.1))]
    for a, b in cases:
        exact = shortest_path(CENTER_LAKE, a, b).length
        approx = oracle.length(a, b)
        assert exact <= approx + 1e-9
        assert abs(exact - approx) <= 2 * h


def test_symmetry_and_triangle_inequality():
    rng = random.Random(2)
    pts = []
    while len(pts) < 12:
        p = (rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99))
        if CENTER_LAKE.contains(p):
            pts.append(p)
    sys_ = PathSystem(CENTER_LAKE)
    for i in range(0, 12, 3):
        a, b, c = pts[i], pts[i + 1], pts[i + 2]
        ab = sys_.distance(a, b)
        ba = sys_.distance(b, a)
        assert abs(ab - ba) <= 1e-9
        assert sys_.distance(a, c) <= ab + sys_.distance(b, c) + 1e-9


def test_shortest_beats_random_admissible_polylines():
    rng = random.Random(9)
    a, b = (0.05, 0.5), (0.95, 0.5)
    best = shortest_path(CENTER_LAKE, a, b).length
    tried = 0
    while tried < 200:
        w1 = (rng.uniform(0, 1), rng.uniform(0, 1))
        w2 = (rng.uniform(0, 1), rng.uniform(0, 1))
        if not (
            CENTER_LAKE.segment_inside(a, w1)
            and CENTER_LAKE.segment_inside(w1, w2)
            and CENTER_LAKE.segment_inside(w2, b)
        ):
            continue
        tried += 1
        cand = PolyPath([a, w1, w2, b]).length
        assert cand >= best - 1e-9


# ---------------------------------------------------------------------------
# separating paths


def test_all_free_equals_plain():
    a, b = (0.0, 0.5), (1.0, 0.5)
    plain = shortest_path(CENTER_LAKE, a, b)
    free = shortest_path_separating(CENTER_LAKE, a, b, SideAssignment.all_free(CENTER_LAKE))
    assert free.vertices == plain.vertices


def test_left_right_pass_opposite_sides():
    a, b = (0.0, 0.5), (1.0, 0.5)
    plain = shortest_path(CENTER_LAKE, a, b).length
    left = shortest_path_separating(CENTER_LAKE, a, b, SideAssignment.of(CENTER_LAKE, lake0="left"))
    right = shortest_path_separating(CENTER_LAKE, a, b, SideAssignment.of(CENTER_LAKE, lake0="right"))
    assert all(v[1] <= 0.5 for v in left.vertices)
    assert all(v[1] >= 0.5 for v in right.vertices)
    assert left.length >= plain - 1e-12 and right.length >= plain - 1e-12


def test_left_right_against_slitted_grid_oracle():
    from pursuit.geodesic import slits_for_assignment

    h = 0.005
    a, b = (0.0, 0.5), (1.0, 0.5)
    for lake0 in ("left", "right"):
        sides = SideAssignment.of(CENTER_LAKE, lake0=lake0)
        slits = slits_for_assignment(CENTER_LAKE, a, b, sides)
        oracle = GridOracle(CENTER_LAKE, h=h, slits=slits)
        exact = shortest_path_separating(CENTER_LAKE, a, b, sides).length
        assert abs(exact - oracle.length(a, b)) <= 2 * h


def test_stacked_lakes_thread_between():
    r = square_region(1.0, [rect_lake(0.3, 0.55, 0.7, 0.8), rect_lake(0.3, 0.2, 0.7, 0.45)])
    sides = SideAssignment.of(r, lake0="left", lake1="right")
    p = shortest_path_separating(r, (0.0, 0.5), (1.0, 0.5), sides)
    assert p.vertices == ((0.0, 0.5), (1.0, 0.5))
    # keeping both on the left chains the lower fence to the upper lake and
    # pushes the path under everything
    both_up = shortest_path_separating(
        r, (0.0, 0.5), (1.0, 0.5), SideAssignment.of(r, lake0="left", lake1="left")
    )
    assert both_up.length > 1.0 + 1e-6
    assert all(v[1] <= 0.45 + 1e-9 for v in both_up.vertices[1:-1])


def test_unchainable_fence_rejected():
    from pursuit.geodesic import SlitError

    # a free lake shadows the constrained one from above on every vertex
    r = square_region(1.0, [rect_lake(0.05, 0.6, 0.95, 0.8), rect_lake(0.4, 0.2, 0.6, 0.4)])
    with pytest.raises(SlitError):
        shortest_path_separating(
            r, (0.0, 0.5), (1.0, 0.5), SideAssignment.of(r, lake1="left")
        )


def test_barrier_blocks_region():
    from pursuit.polyline import PolyPath

    r = square_region(1.0)
    wall = PolyPath([(0.5, 0.0), (0.5, 1.0)])
    sys_ = PathSystem(r, barriers=[wall])
    with pytest.raises(NoPathError):
        sys_.shortest_path((0.25, 0.5), (0.75, 0.5))


# ---------------------------------------------------------------------------
# guard rules


def test_ratio_guard_coincides_with_man_on_wall():
    sys_ = PathSystem(square_region(1.0))
    wall = PolyPath([(0.0, 0.0), (1.0, 0.0)])
    state = guard_point_ratio(GuardState(wall, 0.0), (0.3, 0.0), sys_)
    assert abs(state.lion_arclength - 0.3) < 1e-9
    state = guard_point_ratio(GuardState(wall, 0.0), (0.0, 0.0), sys_)
    assert state.lion_arclength == 0.0


def test_ratio_guard_lipschitz_along_walk():
    sys_ = PathSystem(square_region(1.0))
    wall = PolyPath([(0.0, 0.0), (1.0, 0.0)])
    guard = RatioGuard(wall, sys_)
    rng = random.Random(4)
    m = (0.5, 0.5)
    s_prev = guard.target_arclength(m, fast=False)
    for _ in range(2000):
        ang = rng.uniform(0, 2 * math.pi)
        cand = (m[0] + 0.01 * math.cos(ang), m[1] + 0.01 * math.sin(ang))
        if not (0.001 < cand[0] < 0.999 and 0.001 < cand[1] < 0.999):
            continue
        s = guard.target_arclength(cand, fast=False)
        assert abs(s - s_prev) <= math.dist(m, cand) + 1e-7
        m, s_prev = cand, s


def test_nearest_guard_orthogonal_projection():
    r = square_region(1.0)
    wall = PolyPath([(0.0, 0.0), (1.0, 0.0)])
    assert abs(guard_point_closest(wall, r, (0.3, 0.4)) - 0.3) < 1e-9


def test_nearest_guard_clamps_to_endpoint():
    r = square_region(2.0)
    wall = PolyPath([(0.5, 0.5), (1.0, 0.5)])
    assert abs(guard_point_closest(wall, r, (1.8, 0.9)) - 0.5) < 1e-9
    assert guard_point_closest(wall, r, (0.1, 0.9)) == 0.0


def test_nearest_guard_bent_wall_matches_sampling_oracle():
    region = square_region(1.0, [rect_lake(0.4, 0.4, 0.6, 0.6)])
    sys_ = PathSystem(region)
    wall = shortest_path(region, (0.1, 0.1), (0.9, 0.9))
    guard = NearestGuard(wall, sys_)
    rng = random.Random(8)

    import numpy as np

    def geo_to_samples(m, field, lo, hi, n):
        ss = np.linspace(lo, hi, n)
        qs = np.array([wall.point_at(s) for s in ss])
        vis = region.segments_inside_fast(m, qs)
        d = np.where(vis, np.hypot(qs[:, 0] - m[0], qs[:, 1] - m[1]), np.inf)
        for i, node in enumerate(sys_.nodes):
            if not np.isfinite(field[i]):
                continue
            vis_n = region.segments_inside_fast(node, qs)
            cand = field[i] + np.hypot(qs[:, 0] - node[0], qs[:, 1] - node[1])
            d = np.minimum(d, np.where(vis_n, cand, np.inf))
        k = int(np.argmin(d))
        return float(d[k]), float(ss[k])

    def oracle(m):
        # two-stage dense arclength sampling (4001 coarse + 4001 refined)
        field = sys_.dist_field(m)
        d0, s0 = geo_to_samples(m, field, 0.0, wall.length, 4001)
        step = wall.length / 4000
        d1, s1 = geo_to_samples(
            m, field, max(0.0, s0 - step), min(wall.length, s0 + step), 4001
        )
        return (d1, s1) if d1 < d0 else (d0, s0)

    checked = 0
    for _ in range(20):
        m = (rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95))
        if not region.contains(m) or region.boundary_distance(m) < 0.02:
            continue
        checked += 1
        if checked > 5:
            break
        s, d = guard.target_arclength(m, fast=False)
        best_d, _ = oracle(m)
        assert abs(d - best_d) < 1e-5


def test_nearest_guard_unit_lipschitz():
    r = square_region(1.0)
    sys_ = PathSystem(r)
    wall = PolyPath([(0.0, 0.0), (1.0, 0.0)])
    guard = NearestGuard(wall, sys_)
    rng = random.Random(12)
    m = (0.5, 0.5)
    s_prev, _ = guard.target_arclength(m, fast=False)
    for _ in range(500):
        ang = rng.uniform(0, 2 * math.pi)
        cand = (m[0] + 0.02 * math.cos(ang), m[1] + 0.02 * math.sin(ang))
        if not (0.001 < cand[0] < 0.999 and 0.001 < cand[1] < 0.999):
            continue
        s, _ = guard.target_arclength(cand, fast=False)
        assert abs(s - s_prev) <= math.dist(m, cand) + 1e-7
        m, s_prev = cand, s
