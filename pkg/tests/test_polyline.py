import math

import pytest

from pursuit.polyline import PolyPath


def test_point_at_segment():
    p = PolyPath([(0, 0), (2, 0)])
    assert p.point_at(1.0) == (1.0, 0.0)
    assert p.point_at(0.0) == (0.0, 0.0)


def test_length_elbow():
    assert PolyPath([(0, 0), (1, 0), (1, 1)]).length == 2.0


def test_degenerate_path():
    p = PolyPath([(3, 4)])
    assert p.is_degenerate
    assert p.length == 0.0
    assert p.point_at(0.0) == (3.0, 4.0)


def test_out_of_range_arclength():
    p = PolyPath([(0, 0), (1, 0)])
    with pytest.raises(ValueError):
        p.point_at(1.5)
    with pytest.raises(ValueError):
        p.point_at(-0.5)


def test_duplicate_vertices_collapsed():
    p = PolyPath([(0, 0), (0, 0), (1, 0), (1, 0), (1, 1)])
    assert len(p) == 3


def test_sub_path_and_reverse():
    p = PolyPath([(0, 0), (1, 0), (1, 1)])
    q = p.sub_path(0.5, 1.5)
    assert q.vertices == ((0.5, 0.0), (1.0, 0.0), (1.0, 0.5))
    assert abs(q.length - 1.0) < 1e-12
    r = p.sub_path(1.5, 0.5)
    assert r.vertices == tuple(reversed(q.vertices))


def test_project_prefers_smaller_arclength():
    # equidistant from both arms of the elbow: tie broken toward start
    p = PolyPath([(0, 0), (2, 0), (2, 2)])
    s, d = p.project((1.0, 1.0))
    assert s == 1.0 and abs(d - 1.0) < 1e-12


def test_project_interior():
    p = PolyPath([(0, 0), (10, 0)])
    s, d = p.project((3.0, -2.0))
    assert s == 3.0 and d == 2.0


def test_distance_to():
    p = PolyPath([(0, 0), (1, 0), (1, 1)])
    assert abs(p.distance_to((2.0, 1.0)) - 1.0) < 1e-12
    assert p.distance_to((1.0, 0.5)) == 0.0


def test_concat():
    p = PolyPath([(0, 0), (1, 0)]).concat(PolyPath([(1, 0), (1, 3)]))
    assert p.length == 4.0
    assert p.point_at(2.0) == (1.0, 1.0)
