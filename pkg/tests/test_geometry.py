from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatpierce.geometry import (
    ConvexPolygon, Disk, Interval, Point, SimplePolygon, circle_circle_intersections,
    convex_intersect, disk_contains, dist, point_in_polygon,
)

from conftest import square

S2, S8 = math.sqrt(2), math.sqrt(8)
coord = st.floats(-10, 10, allow_nan=False)


def test_dist_examples():
    assert dist((0, 0), (0, 0)) == 0
    assert dist((0, 0), (3, 4)) == 5
    assert dist((S8 - 2, 0), (S2, 2 - S2)) == pytest.approx(S8 - 2, abs=1e-15)


@given(coord, coord, coord, coord)
def test_dist_symmetric(a, b, c, d):
    assert dist((a, b), (c, d)) == dist((c, d), (a, b))
    assert dist((a, b), (a, b)) == 0


def test_disk_contains_closed():
    unit = Disk(Point(0, 0), 1)
    assert disk_contains(unit, (1, 0))
    assert not disk_contains(unit, (1.0001, 0))
    # the d = 4 tangency; exact in real arithmetic, one ulp of slack in doubles
    assert disk_contains(Disk(Point(S2, 2 - S2), S8 - 2), (S8 - 2, 0), 1e-15)


def test_disk_rejects_negative_radius():
    with pytest.raises(ValueError):
        Disk(Point(0, 0), -1)


def test_circle_circle_examples():
    pts = sorted(circle_circle_intersections(Disk(Point(0, 0), S8), Disk(Point(S8, 0), 2)))
    assert np.allclose(pts, [(3 * S2 / 2, -math.sqrt(3.5)), (3 * S2 / 2, math.sqrt(3.5))])
    assert circle_circle_intersections(Disk(Point(0, 0), 1), Disk(Point(4, 0), 1)) == []
    pts = sorted(circle_circle_intersections(Disk(Point(0, 0), 2), Disk(Point(2, 0), 2)))
    assert np.allclose(pts, [(1, -math.sqrt(3)), (1, math.sqrt(3))])


def test_circle_circle_coincident():
    with pytest.raises(ValueError, match="coincident"):
        circle_circle_intersections(Disk(Point(1, 1), 2), Disk(Point(1, 1), 2))


def test_circle_circle_nested_is_empty():
    assert circle_circle_intersections(Disk(Point(0, 0), 3), Disk(Point(0.5, 0), 1)) == []


@settings(max_examples=200)
@given(coord, coord, st.floats(0.1, 5), coord, coord, st.floats(0.1, 5))
def test_circle_points_on_both_circles(x1, y1, r1, x2, y2, r2):
    if (x1, y1, r1) == (x2, y2, r2):
        return
    for p in circle_circle_intersections(Disk(Point(x1, y1), r1), Disk(Point(x2, y2), r2)):
        assert abs(dist(p, (x1, y1)) - r1) <= 1e-9 * max(1, r1)
        assert abs(dist(p, (x2, y2)) - r2) <= 1e-9 * max(1, r2)


def test_convex_intersect_examples():
    unit = square(0.5, 0.5, 0.5)
    res = convex_intersect(unit, unit)
    assert not res.empty and set(res.polygon.vertices) == set(unit.vertices)
    assert convex_intersect(unit, square(2.5, 0.5, 0.5)).empty
    res = convex_intersect(square(1, 1, 1), square(2, 2, 1))
    assert sorted(res.polygon.vertices) == sorted(square(1.5, 1.5, 0.5).vertices)


def test_convex_intersect_touching_corner_has_witness():
    res = convex_intersect(square(0.5, 0.5, 0.5), square(1.5, 1.5, 0.5))
    assert res.empty and res.witness is not None
    assert dist(res.witness, (1, 1)) < 1e-12


@settings(max_examples=100)
@given(coord, coord, st.floats(0.2, 3), coord, coord, st.floats(0.2, 3))
def test_convex_intersect_inside_both(x1, y1, h1, x2, y2, h2):
    a, b = square(x1, y1, h1), square(x2, y2, h2)
    res = convex_intersect(a, b)
    if res.polygon is not None:
        for v in res.polygon.vertices:
            assert a.contains(v, 1e-9) and b.contains(v, 1e-9)


def test_point_in_polygon_examples():
    tri = SimplePolygon(((0, 0), (1, 0), (0, 1)))
    assert point_in_polygon((1 / 3, 1 / 3), tri)
    assert point_in_polygon((1, 0), tri)
    assert not point_in_polygon((5, 5), tri)


def test_nonconvex_polygon_notch():
    # a U shape: the notch is outside, the arms are inside
    u = SimplePolygon(((0, 0), (3, 0), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)))
    assert not point_in_polygon((1.5, 2), u)
    assert point_in_polygon((0.5, 2), u)
    assert u.contains_many(np.array([[1.5, 2.0], [0.5, 2.0]])).tolist() == [False, True]


def test_polygon_validation():
    with pytest.raises(ValueError):
        ConvexPolygon(((0, 0), (1, 0)))
    with pytest.raises(ValueError):
        ConvexPolygon(((0, 0), (0, 1), (1, 0)))      # clockwise
    with pytest.raises(ValueError):
        SimplePolygon(((0, 0), (1, 1), (1, 0), (0, 1)))  # bow tie


@settings(max_examples=200)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_interval_encloses_float_evaluation(a, b, c):
    A, B, C = Interval.enclose(a), Interval.enclose(b), Interval.enclose(c)
    expr = (A * B - C).sqr() + (A + C) * B
    val = (a * b - c) ** 2 + (a + c) * b
    assert expr.lo <= val <= expr.hi
    s = (A.sqr() + B.sqr()).sqrt()
    assert s.lo <= math.sqrt(a * a + b * b) <= s.hi


def test_interval_rejects_empty():
    with pytest.raises(ValueError):
        Interval(1.0, 0.0)
