import json
import random

import numpy as np
import pytest

from pursuit.region import FeasibleRegion, RegionError, rect_lake, square_region


UNIT = [(0, 0), (1, 0), (1, 1), (0, 1)]


def test_valid_region_builds():
    r = square_region(1.0, [rect_lake(0.2, 0.2, 0.4, 0.4)])
    assert len(r.lakes) == 1
    assert abs(r.diameter - 2 ** 0.5) < 1e-12


def test_self_intersecting_lake_rejected():
    bowtie = [(0.2, 0.2), (0.6, 0.6), (0.6, 0.2), (0.2, 0.6)]
    with pytest.raises(RegionError) as exc:
        FeasibleRegion(UNIT, [bowtie])
    assert exc.value.invariant == "lake-simple"


def test_exterior_orientation_enforced():
    with pytest.raises(RegionError) as exc:
        FeasibleRegion(list(reversed(UNIT)))
    assert exc.value.invariant in ("exterior-ccw", "exterior-simple")


def test_lake_orientation_enforced():
    ccw_lake = list(reversed(rect_lake(0.2, 0.2, 0.4, 0.4)))
    with pytest.raises(RegionError) as exc:
        FeasibleRegion(UNIT, [ccw_lake])
    assert exc.value.invariant == "lake-cw"


def test_lake_outside_rejected():
    with pytest.raises(RegionError) as exc:
        FeasibleRegion(UNIT, [rect_lake(0.8, 0.8, 1.5, 1.5)])
    assert exc.value.invariant in ("lake-inside", "boundaries-disjoint")


def test_crossing_lakes_rejected():
    with pytest.raises(RegionError) as exc:
        FeasibleRegion(
            UNIT,
            [rect_lake(0.2, 0.2, 0.5, 0.5), rect_lake(0.4, 0.4, 0.7, 0.7)],
        )
    assert exc.value.invariant == "boundaries-disjoint"


def test_nested_lakes_rejected():
    with pytest.raises(RegionError) as exc:
        FeasibleRegion(
            UNIT,
            [rect_lake(0.2, 0.2, 0.8, 0.8), rect_lake(0.4, 0.4, 0.6, 0.6)],
        )
    assert exc.value.invariant in ("lakes-disjoint", "boundaries-disjoint")


def test_membership():
    r = square_region(1.0, [rect_lake(0.25, 0.25, 0.75, 0.75)])
    assert r.contains((0.1, 0.1))
    assert not r.contains((0.5, 0.5))  # inside the lake
    assert r.contains((0.25, 0.5))  # lake boundary belongs to the region
    assert r.contains((0.0, 0.0))  # exterior corner
    assert not r.contains((1.2, 0.5))


def test_points_inside_matches_scalar():
    r = square_region(1.0, [rect_lake(0.25, 0.25, 0.75, 0.75)])
    rng = random.Random(11)
    pts = [(rng.uniform(-0.2, 1.2), rng.uniform(-0.2, 1.2)) for _ in range(400)]
    batch = r.points_inside(np.array(pts))
    for p, b in zip(pts, batch):
        assert bool(b) == r.contains(p)


def test_segment_inside():
    r = square_region(1.0, [rect_lake(0.25, 0.25, 0.75, 0.75)])
    assert r.segment_inside((0.1, 0.1), (0.9, 0.1))
    assert not r.segment_inside((0.1, 0.5), (0.9, 0.5))  # through the lake
    # along the lake boundary and through its corners
    assert r.segment_inside((0.25, 0.25), (0.75, 0.25))
    assert r.segment_inside((0.1, 0.1), (0.25, 0.25))
    # chord between two lake corners cutting the lake interior
    assert not r.segment_inside((0.25, 0.25), (0.75, 0.75))
    # leaving the exterior
    assert not r.segment_inside((0.5, 0.9), (0.5, 1.5))


def test_segments_inside_fast_agrees_with_careful():
    r = square_region(1.0, [rect_lake(0.25, 0.25, 0.75, 0.75)])
    rng = random.Random(5)
    verts = np.array(r.all_vertices)
    for _ in range(60):
        p = (rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99))
        if not r.contains(p) or r.boundary_distance(p) < 1e-6:
            continue
        fast = r.segments_inside_fast(p, verts)
        careful = [r.segment_inside(p, tuple(v)) for v in verts]
        assert list(fast) == careful


def test_json_round_trip(tmp_path):
    r = square_region(2.0, [rect_lake(0.5, 0.5, 1.0, 1.0)])
    f = tmp_path / "region.json"
    f.write_text(json.dumps(r.to_json()))
    r2 = FeasibleRegion.load(str(f))
    assert r2.exterior == r.exterior
    assert r2.lakes == r.lakes


def test_lake_interior_point():
    r = square_region(1.0, [rect_lake(0.25, 0.25, 0.75, 0.75)])
    p = r.lake_interior_point(0)
    assert 0.25 < p[0] < 0.75 and 0.25 < p[1] < 0.75
