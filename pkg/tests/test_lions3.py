import math

import pytest

from pursuit.adversaries import BoundaryHugger, GreedyEvader, RandomWalkMan
from pursuit.engine import verify_trace_speeds
from pursuit.geodesic import PathSystem, shortest_path
from pursuit.geom import dist
from pursuit.lions3 import (
    EndgameDriver,
    GuardedWall,
    LineGuard,
    MinimalityViolation,
    StripState,
    classify_lakes,
    plan_cut,
    run_three_lions,
    shrinking_move,
    split_strip,
    triangle_inradius,
)
from pursuit.polyline import PolyPath
from pursuit.region import FeasibleRegion, rect_lake, square_region


def _hand_strip(region, path_a, path_b, coast_p, coast_q):
    sys_ = PathSystem(region)
    wa = GuardedWall(path_a, sys_, "stand", lion=0, live=True)
    wb = GuardedWall(path_b, sys_, "stand", lion=1, live=True)
    strip = StripState(
        wall_a=wa,
        wall_b=wb,
        path_a=path_a,
        path_b=path_b,
        coast_p=coast_p,
        coast_q=coast_q,
        lake_ids=[],
    )
    from pursuit.lions3 import lakes_inside_ring, strip_ring

    strip.lake_ids = lakes_inside_ring(region, strip_ring(strip))
    return strip


def _full_square_strip(region):
    # walls = left and right edges, coasts = bottom and top
    return _hand_strip(
        region,
        PolyPath([(0.0, 0.0), (0.0, 1.0)]),
        PolyPath([(1.0, 0.0), (1.0, 1.0)]),
        PolyPath([(0.0, 0.0), (1.0, 0.0)]),
        PolyPath([(0.0, 1.0), (1.0, 1.0)]),
    )


def test_classify_inner_and_boundary():
    region = square_region(1.0, [rect_lake(0.4, 0.4, 0.6, 0.6)])
    strip = _full_square_strip(region)
    assert classify_lakes(region, strip) == {0: "inner"}
    # lake touching the left wall
    region2 = square_region(1.0, [[(0.0, 0.4), (0.0, 0.6), (0.3, 0.6), (0.3, 0.4)]])
    # scoot it off the exterior so the region stays valid
    region2 = square_region(
        1.0, [[(0.001, 0.4), (0.001, 0.6), (0.3, 0.6), (0.3, 0.4)]]
    )
    strip2 = _hand_strip(
        region2,
        PolyPath([(0.001, 0.0), (0.001, 0.4), (0.001, 0.6), (0.001, 1.0)]),
        PolyPath([(1.0, 0.0), (1.0, 1.0)]),
        PolyPath([(0.001, 0.0), (1.0, 0.0)]),
        PolyPath([(0.001, 1.0), (1.0, 1.0)]),
    )
    assert classify_lakes(region2, strip2)[0] == "a"


def test_classify_detects_nonminimal():
    region = square_region(1.0, [rect_lake(0.0001, 0.4, 0.9999, 0.6)])
    strip = _hand_strip(
        region,
        PolyPath([(0.0001, 0.0), (0.0001, 1.0)]),
        PolyPath([(0.9999, 0.0), (0.9999, 1.0)]),
        PolyPath([(0.0001, 0.0), (0.9999, 0.0)]),
        PolyPath([(0.0001, 1.0), (0.9999, 1.0)]),
    )
    with pytest.raises(MinimalityViolation):
        classify_lakes(region, strip)


def test_shrinking_move_keeps_man_side():
    region = square_region(1.0, [rect_lake(0.0001, 0.4, 0.9999, 0.6)])
    strip = _hand_strip(
        region,
        PolyPath([(0.0001, 0.0), (0.0001, 1.0)]),
        PolyPath([(0.9999, 0.0), (0.9999, 1.0)]),
        PolyPath([(0.0001, 0.0), (0.9999, 0.0)]),
        PolyPath([(0.0001, 1.0), (0.9999, 1.0)]),
    )
    below = shrinking_move(region, strip, (0.5, 0.2))
    assert below.lake_ids == []
    assert below.path_a.length < strip.path_a.length
    from pursuit.lions3 import _point_in_ring, strip_ring

    assert _point_in_ring((0.5, 0.2), strip_ring(below))
    assert not _point_in_ring((0.5, 0.8), strip_ring(below))
    above = shrinking_move(region, strip, (0.5, 0.8))
    assert _point_in_ring((0.5, 0.8), strip_ring(above))


def test_minimal_strip_shrink_is_identity():
    region = square_region(1.0, [rect_lake(0.4, 0.4, 0.6, 0.6)])
    strip = _full_square_strip(region)
    assert shrinking_move(region, strip, (0.5, 0.8)) is strip


def test_cut_case1_touches_lake_and_splits():
    region = square_region(1.0, [rect_lake(0.4, 0.4, 0.6, 0.6)])
    strip = _full_square_strip(region)
    plan = plan_cut(region, strip)
    assert plan.case == 1
    lake = region.lakes[0]
    assert min(plan.path.distance_to(v) for v in lake) <= 1e-6
    wall = GuardedWall(plan.path, plan.system, "ratio", lion=2).attach_rules()
    wall.live = True
    # man on the far side: his strip keeps the lake as a boundary lake
    new_strip, freed = split_strip(region, strip, plan, wall, (0.9, 0.5))
    labels = classify_lakes(region, new_strip)
    assert labels.get(0) in ("a", "b")
    # man on the origin side: no lakes remain
    new_strip2, _ = split_strip(region, strip, plan, wall, (0.05, 0.5))
    assert new_strip2.lake_ids == []


def test_cut_wall_is_shortest_in_its_guard_system():
    # sub-strip soundness: the guarding condition re-verifies by length
    region = square_region(1.0, [rect_lake(0.4, 0.4, 0.6, 0.6)])
    strip = _full_square_strip(region)
    plan = plan_cut(region, strip)
    recomputed = plan.system.shortest_path(plan.path.start, plan.path.end)
    assert abs(recomputed.length - plan.path.length) <= 1e-7 * max(1.0, plan.path.length)


def test_run_capture_square_no_lakes():
    region = square_region(1.0)
    out, ctrl = run_three_lions(region, GreedyEvader(), horizon=80.0, man0=(0.5, 0.5))
    assert out.verdict == "capture"
    assert ctrl.cut_count == 0
    assert verify_trace_speeds(out.trace, [1.0, 1.0, 1.0, 1.0]) == []


def test_run_capture_one_lake_two_cuts_max():
    region = square_region(1.0, [rect_lake(0.35, 0.4, 0.65, 0.6)])
    out, ctrl = run_three_lions(region, GreedyEvader(), horizon=100.0, man0=(0.5, 0.8))
    assert out.verdict == "capture"
    assert ctrl.cut_count <= 2
    assert verify_trace_speeds(out.trace, [1.0, 1.0, 1.0, 1.0]) == []


def test_run_capture_two_lakes_seeded_random_man():
    region = square_region(
        1.0, [rect_lake(0.2, 0.55, 0.45, 0.75), rect_lake(0.55, 0.25, 0.8, 0.45)]
    )
    out, ctrl = run_three_lions(region, RandomWalkMan(5), horizon=120.0, man0=(0.5, 0.9))
    assert out.verdict == "capture"
    assert ctrl.cut_count <= 4


def test_progress_measure_lexicographic():
    region = square_region(
        1.0, [rect_lake(0.2, 0.55, 0.45, 0.75), rect_lake(0.55, 0.25, 0.8, 0.45)]
    )
    out, ctrl = run_three_lions(region, GreedyEvader(), horizon=120.0, man0=(0.5, 0.9))
    assert out.verdict == "capture"
    # lake counts reported at each strip reduction never increase, and each
    # halving halves the coast exactly
    lakes_seq = [e[2]["lakes"] for e in out.trace.events if e[1] == "strip_reduced"]
    assert all(b <= a for a, b in zip(lakes_seq, lakes_seq[1:]))
    halvings = [e[2] for e in out.trace.events if e[1] == "halved"]
    coasts = [e[2]["coast_len"] for e in out.trace.events if e[1] == "halving"]
    for before, after in zip(coasts, coasts[1:]):
        assert after <= before / 2.0 + 1e-9


def test_no_wall_crossing_without_capture():
    region = square_region(1.0, [rect_lake(0.35, 0.4, 0.65, 0.6)])
    out, ctrl = run_three_lions(region, BoundaryHugger(), horizon=100.0, man0=(0.5, 0.8))
    assert out.verdict == "capture"
    # a crossing capture, if any, is the final event
    crossings = [e for e in out.trace.events if e[1] == "capture" and e[2].get("crossing")]
    assert len(crossings) <= 1


# ---------------------------------------------------------------------------
# endgame


def test_inradius_solver_equilateral():
    import numpy as np

    lines = [
        LineGuard((0.0, 1.0), 0.0),
        LineGuard((-math.sqrt(3) / 2, -0.5), -1.0),
        LineGuard((math.sqrt(3) / 2, -0.5), -1.0),
    ]
    center, rho = triangle_inradius(lines)
    assert rho > 0.0
    for l in lines:
        assert l.gap(center) == pytest.approx(rho, abs=1e-9)


def test_endgame_static_man_capture_time():
    man = (0.0, 0.0)
    lions = [(0.0, -0.4), (-0.5, 0.3), (0.45, 0.35)]
    drv = EndgameDriver(man, lions)
    rho0 = drv.inradius()
    assert rho0 > 0.0
    dt = 0.005
    steps = 0
    pos = list(lions)
    while drv.inradius() > 1e-4 and steps < 100000:
        pos = drv.step_targets(man, pos, dt)
        steps += 1
    t = steps * dt
    assert abs(t - rho0) <= 0.05 * rho0 + dt


def test_endgame_parallel_runner_still_shrinks():
    man = (0.0, 0.0)
    lions = [(0.0, -0.4), (-0.5, 0.3), (0.5, 0.3)]
    drv = EndgameDriver(man, lions)
    dt = 0.005
    pos = list(lions)
    m = man
    radii = [drv.inradius()]
    for k in range(4000):
        m_next = (m[0] + dt, m[1])  # full speed parallel to line 0
        pos = drv.step_targets(m_next, pos, dt)
        m = m_next
        radii.append(drv.inradius())
    assert all(b <= a + 1e-12 for a, b in zip(radii, radii[1:]))
    assert radii[-1] < radii[0]


def test_endgame_degenerate_triangle_immediate():
    man = (0.0, 0.0)
    lions = [(0.0, -1e-9), (-1e-9, 1e-9), (1e-9, 1e-9)]
    drv = EndgameDriver(man, lions)
    assert drv.inradius() <= 1e-6


def test_guard_lipschitz_on_traces():
    region = square_region(1.0, [rect_lake(0.35, 0.4, 0.65, 0.6)])
    out, ctrl = run_three_lions(region, GreedyEvader(), horizon=100.0, man0=(0.5, 0.8))
    dt = out.trace.dt
    for k in range(1, len(out.trace.samples)):
        t0, _, l0 = out.trace.samples[k - 1]
        t1, _, l1 = out.trace.samples[k]
        span = t1 - t0
        for a, b in zip(l0, l1):
            assert dist(a, b) <= span * (1.0 + 1e-7) + 1e-12
