"""Planar primitives: points, closed disks, polygons, predicates and a scalar interval.

Every region here is closed.  Predicates accept an absolute tolerance ``tol``
which widens the region by that amount; the default of zero gives the exact
floating-point predicate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np


class Point(NamedTuple):
    x: float
    y: float


def as_point(p) -> Point:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite point {p!r}")
    return Point(x, y)


def dist(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not self.radius >= 0.0:
            raise ValueError(f"disk radius must be >= 0, got {self.radius}")
        object.__setattr__(self, "radius", float(self.radius))

    is_convex = True

    def contains(self, p, tol: float = 0.0) -> bool:
        return disk_contains(self, p, tol)

    def contains_many(self, pts: np.ndarray, tol: float = 0.0) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        d = np.hypot(pts[:, 0] - self.center.x, pts[:, 1] - self.center.y)
        return d <= self.radius + tol

    def violation(self, p) -> float:
        """Signed distance-like violation: <= 0 exactly on the disk."""
        return dist(p, self.center) - self.radius

    def bbox(self) -> tuple[float, float, float, float]:
        c, r = self.center, self.radius
        return (c.x - r, c.y - r, c.x + r, c.y + r)


def disk_contains(d: Disk, p, tol: float = 0.0) -> bool:
    return dist(d.center, p) <= d.radius + tol


def circle_circle_intersections(a: Disk, b: Disk, tol: float = 1e-12) -> list[Point]:
    """Intersection points of the two boundary circles.

    Near-tangent pairs (within ``tol``) yield the single tangency point.
    """
    dx, dy = b.center.x - a.center.x, b.center.y - a.center.y
    d = math.hypot(dx, dy)
    if d == 0.0:
        if a.radius == b.radius:
            raise ValueError("coincident")
        return []
    r0, r1 = a.radius, b.radius
    if d > r0 + r1 + tol or d < abs(r0 - r1) - tol:
        return []
    along = (r0 * r0 - r1 * r1 + d * d) / (2.0 * d)
    h2 = r0 * r0 - along * along
    ux, uy = dx / d, dy / d
    mx, my = a.center.x + along * ux, a.center.y + along * uy
    if h2 <= tol * max(1.0, r0):
        return [Point(mx, my)]
    h = math.sqrt(h2)
    return [Point(mx - h * uy, my + h * ux), Point(mx + h * uy, my - h * ux)]


def circle_segment_intersections(c: Disk, p, q, tol: float = 1e-12) -> list[Point]:
    px, py = p
    dx, dy = q[0] - px, q[1] - py
    fx, fy = px - c.center.x, py - c.center.y
    a = dx * dx + dy * dy
    if a == 0.0:
        return [Point(px, py)] if abs(math.hypot(fx, fy) - c.radius) <= tol else []
    b = 2.0 * (fx * dx + fy * dy)
    cc = fx * fx + fy * fy - c.radius * c.radius
    disc = b * b - 4 * a * cc
    if disc < -tol * a:
        return []
    disc = max(disc, 0.0)
    s = math.sqrt(disc)
    out = []
    for t in sorted({(-b - s) / (2 * a), (-b + s) / (2 * a)}):
        if -1e-12 <= t <= 1 + 1e-12:
            t = min(max(t, 0.0), 1.0)
            out.append(Point(px + t * dx, py + t * dy))
    return out


def _cross(ox, oy, ax, ay, bx, by) -> float:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def segment_intersections(p1, p2, q1, q2, tol: float = 1e-12) -> list[Point]:
    """Common points of two closed segments (endpoints of the overlap if collinear)."""
    rx, ry = p2[0] - p1[0], p2[1] - p1[1]
    sx, sy = q2[0] - q1[0], q2[1] - q1[1]
    denom = rx * sy - ry * sx
    qpx, qpy = q1[0] - p1[0], q1[1] - p1[1]
    scale = max(math.hypot(rx, ry) * math.hypot(sx, sy), 1e-300)
    if abs(denom) <= tol * scale:
        if abs(qpx * ry - qpy * rx) > tol * max(math.hypot(rx, ry), 1e-300):
            return []
        # collinear: clip q-endpoints onto p's parameter range
        rr = rx * rx + ry * ry
        if rr == 0.0:
            return [Point(*p1)] if point_segment_distance(p1, q1, q2) <= tol else []
        t0 = (qpx * rx + qpy * ry) / rr
        t1 = t0 + (sx * rx + sy * ry) / rr
        lo, hi = max(min(t0, t1), 0.0), min(max(t0, t1), 1.0)
        if lo > hi + 1e-12:
            return []
        pts = {Point(p1[0] + lo * rx, p1[1] + lo * ry), Point(p1[0] + hi * rx, p1[1] + hi * ry)}
        return sorted(pts)
    t = (qpx * sy - qpy * sx) / denom
    u = (qpx * ry - qpy * rx) / denom
    eps = 1e-12
    if -eps <= t <= 1 + eps and -eps <= u <= 1 + eps:
        t = min(max(t, 0.0), 1.0)
        return [Point(p1[0] + t * rx, p1[1] + t * ry)]
    return []


def point_segment_distance(p, a, b) -> float:
    return math.hypot(*_closest_on_segment_offset(p, a, b))


def closest_point_on_segment(p, a, b) -> Point:
    ox, oy = _closest_on_segment_offset(p, a, b)
    return Point(p[0] - ox, p[1] - oy)


def _closest_on_segment_offset(p, a, b) -> tuple[float, float]:
    abx, aby = b[0] - a[0], b[1] - a[1]
    apx, apy = p[0] - a[0], p[1] - a[1]
    ll = abx * abx + aby * aby
    t = 0.0 if ll == 0.0 else min(max((apx * abx + apy * aby) / ll, 0.0), 1.0)
    return (apx - t * abx, apy - t * aby)


def signed_area(vertices: Sequence) -> float:
    s = 0.0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def is_strictly_convex_ccw(vertices: Sequence) -> bool:
    n = len(vertices)
    if n < 3:
        return False
    for i in range(n):
        if _cross(*vertices[i - 1], *vertices[i], *vertices[(i + 1) % n]) <= 0.0:
            return False
    # a strictly left-turning closed walk could still wind twice
    return abs(_total_turn(vertices) - 2 * math.pi) < 1e-6


def _total_turn(vertices: Sequence) -> float:
    n = len(vertices)
    total = 0.0
    for i in range(n):
        ax, ay = vertices[i][0] - vertices[i - 1][0], vertices[i][1] - vertices[i - 1][1]
        bx, by = vertices[(i + 1) % n][0] - vertices[i][0], vertices[(i + 1) % n][1] - vertices[i][1]
        total += math.atan2(ax * by - ay * bx, ax * bx + ay * by)
    return total


def is_simple(vertices: Sequence) -> bool:
    n = len(vertices)
    if n < 3 or len(set(map(tuple, vertices))) != n:
        return False
    for i in range(n):
        a1, a2 = vertices[i], vertices[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or j == (i + 1) % n:
                continue
            b1, b2 = vertices[j], vertices[(j + 1) % n]
            if segment_intersections(a1, a2, b1, b2):
                return False
    return True


@dataclass(frozen=True)
class _PolygonBase:
    vertices: tuple[Point, ...]

    def _normalize(self):
        object.__setattr__(self, "vertices", tuple(as_point(v) for v in self.vertices))
        if len(self.vertices) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("repeated polygon vertex")

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float)

    @cached_property
    def edges(self) -> np.ndarray:
        """(n, 4) array of edges x0, y0, x1, y1 in boundary order."""
        v = self.array
        return np.hstack([v, np.roll(v, -1, axis=0)])

    def bbox(self) -> tuple[float, float, float, float]:
        v = self.array
        return (v[:, 0].min(), v[:, 1].min(), v[:, 0].max(), v[:, 1].max())

    def boundary_distance(self, p) -> float:
        return min(point_segment_distance(p, self.vertices[i - 1], self.vertices[i])
                   for i in range(len(self.vertices)))

    def boundary_distance_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        e = self.edges
        ax, ay, bx, by = e[:, 0], e[:, 1], e[:, 2], e[:, 3]
        abx, aby = bx - ax, by - ay
        ll = abx * abx + aby * aby
        px = pts[:, 0:1] - ax
        py = pts[:, 1:2] - ay
        t = np.clip((px * abx + py * aby) / ll, 0.0, 1.0)
        return np.hypot(px - t * abx, py - t * aby).min(axis=1)


@dataclass(frozen=True)
class ConvexPolygon(_PolygonBase):
    """Strictly convex polygon, vertices counterclockwise."""

    is_convex = True

    def __post_init__(self):
        self._normalize()
        if not is_strictly_convex_ccw(self.vertices):
            raise ValueError("vertices do not form a strictly convex counterclockwise polygon")

    @cached_property
    def halfplanes(self) -> tuple[np.ndarray, np.ndarray]:
        """Unit outward normals N (n,2) and offsets b with p inside iff N p <= b."""
        e = self.edges
        dx, dy = e[:, 2] - e[:, 0], e[:, 3] - e[:, 1]
        ln = np.hypot(dx, dy)
        normals = np.column_stack([dy / ln, -dx / ln])
        b = normals[:, 0] * e[:, 0] + normals[:, 1] * e[:, 1]
        return normals, b

    def violation(self, p) -> float:
        """Max signed edge distance; <= 0 exactly on the polygon."""
        n, b = self.halfplanes
        return float(np.max(n @ np.asarray(p, dtype=float) - b))

    def violation_many(self, pts: np.ndarray) -> np.ndarray:
        n, b = self.halfplanes
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        return (pts @ n.T - b).max(axis=1)

    def contains(self, p, tol: float = 0.0) -> bool:
        return self.violation(p) <= tol

    def contains_many(self, pts: np.ndarray, tol: float = 0.0) -> np.ndarray:
        return self.violation_many(pts) <= tol


@dataclass(frozen=True)
class SimplePolygon(_PolygonBase):
    """Simple (non-self-intersecting) polygon, vertices counterclockwise."""

    is_convex = False

    def __post_init__(self):
        self._normalize()
        if signed_area(self.vertices) <= 0.0:
            raise ValueError("polygon vertices must be counterclockwise")
        if not is_simple(self.vertices):
            raise ValueError("polygon is self-intersecting")

    def contains(self, p, tol: float = 0.0) -> bool:
        return point_in_polygon(p, self, tol)

    def contains_many(self, pts: np.ndarray, tol: float = 0.0) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        return _crossing_parity(pts, self.edges) | (self.boundary_distance_many(pts) <= max(tol, 0.0))


def _crossing_parity(pts: np.ndarray, edges: np.ndarray) -> np.ndarray:
    x, y = pts[:, 0:1], pts[:, 1:2]
    x0, y0, x1, y1 = edges[:, 0], edges[:, 1], edges[:, 2], edges[:, 3]
    straddle = (y0 > y) != (y1 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xcross = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
    hits = straddle & (x < xcross)
    return (hits.sum(axis=1) % 2) == 1


def point_in_polygon(p, s: _PolygonBase, tol: float = 0.0) -> bool:
    """Closed-region test: crossing number, with on-boundary points counted inside."""
    if s.boundary_distance(p) <= tol:
        return True
    return bool(_crossing_parity(np.asarray([p], dtype=float), s.edges)[0])


@dataclass(frozen=True)
class ClipResult:
    """Intersection of two convex polygons.

    ``polygon`` is None when the intersection has zero area; ``witness`` is then
    a common point if one exists (a touching corner or shared edge).
    """

    polygon: ConvexPolygon | None
    witness: Point | None = None

    @property
    def empty(self) -> bool:
        return self.polygon is None


def _clip_halfplane(poly: list, a, b) -> list:
    out = []
    n = len(poly)
    for i in range(n):
        cur, nxt = poly[i], poly[(i + 1) % n]
        c_in = _cross(*a, *b, *cur)
        n_in = _cross(*a, *b, *nxt)
        if c_in >= 0:
            out.append(cur)
        if (c_in >= 0) != (n_in >= 0):
            t = c_in / (c_in - n_in)
            out.append((cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])))
    return out


def convex_intersect(a: ConvexPolygon, b: ConvexPolygon, tol: float = 1e-12) -> ClipResult:
    poly = [tuple(v) for v in a.vertices]
    m = len(b.vertices)
    for i in range(m):
        poly = _clip_halfplane(poly, b.vertices[i], b.vertices[(i + 1) % m])
        if not poly:
            break
    cleaned: list[Point] = []
    for v in poly:
        if not cleaned or dist(v, cleaned[-1]) > tol:
            cleaned.append(Point(*v))
    if len(cleaned) > 1 and dist(cleaned[0], cleaned[-1]) <= tol:
        cleaned.pop()
    if len(cleaned) >= 3 and signed_area(cleaned) > tol:
        hull = convex_hull(cleaned)
        if len(hull) >= 3:
            try:
                return ClipResult(ConvexPolygon(tuple(hull)), None)
            except ValueError:
                pass
    if cleaned:
        return ClipResult(None, cleaned[0])
    return ClipResult(None, None)


def convex_hull(points: Sequence) -> list[Point]:
    """Andrew's monotone chain; counterclockwise, collinear points dropped."""
    pts = sorted(set(Point(float(p[0]), float(p[1])) for p in points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and _cross(*out[-2], *out[-1], *p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


def polygon_centroid(vertices: Sequence) -> Point:
    a = signed_area(vertices)
    if abs(a) < 1e-300:
        xs = [v[0] for v in vertices]
        ys = [v[1] for v in vertices]
        return Point(sum(xs) / len(xs), sum(ys) / len(ys))
    cx = cy = 0.0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        w = x0 * y1 - x1 * y0
        cx += (x0 + x1) * w
        cy += (y0 + y1) * w
    return Point(cx / (6 * a), cy / (6 * a))


# --- scalar interval with outward rounding ------------------------------------

ROUNDING_MODE = "ulp-padding (math.nextafter outward after every operation)"


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi].  Every operation rounds outward by one ulp,
    so the exact real result is always enclosed."""

    lo: float
    hi: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        hi = self.lo if self.hi is None else self.hi
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(hi))
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def enclose(cls, value: float) -> "Interval":
        """Interval around a decimal value whose binary rounding is inexact."""
        v = float(value)
        return cls(_down(v), _up(v))

    @staticmethod
    def _coerce(other) -> "Interval":
        return other if isinstance(other, Interval) else Interval(other, other)

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other):
        o = self._coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(_down(min(prods)), _up(max(prods)))

    __rmul__ = __mul__

    def sqr(self) -> "Interval":
        a, b = abs(self.lo), abs(self.hi)
        lo = 0.0 if self.lo <= 0.0 <= self.hi else min(a, b) ** 2
        return Interval(max(0.0, _down(lo)), _up(max(a, b) ** 2))

    def sqrt(self) -> "Interval":
        if self.hi < 0:
            raise ValueError("sqrt of a negative interval")
        return Interval(max(0.0, _down(math.sqrt(max(self.lo, 0.0)))), _up(math.sqrt(self.hi)))

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"


# --- boundary/boundary intersection points (vectorized) -----------------------


def _segments_vs_segments(e1: np.ndarray, e2: np.ndarray) -> np.ndarray:
    """Crossing points of every non-parallel edge pair; overlaps are left to the
    caller, who always has the overlap's endpoints among the vertices."""
    p = e1[:, None, 0:2]
    r = e1[:, None, 2:4] - p
    q = e2[None, :, 0:2]
    s = e2[None, :, 2:4] - q
    denom = r[..., 0] * s[..., 1] - r[..., 1] * s[..., 0]
    qp = q - p
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (qp[..., 0] * s[..., 1] - qp[..., 1] * s[..., 0]) / denom
        u = (qp[..., 0] * r[..., 1] - qp[..., 1] * r[..., 0]) / denom
    eps = 1e-12
    ok = (np.abs(denom) > 1e-300) & (t >= -eps) & (t <= 1 + eps) & (u >= -eps) & (u <= 1 + eps)
    t = np.clip(t, 0.0, 1.0)
    pts = p + t[..., None] * r
    return pts[ok]


def _circle_vs_segments(c: Disk, e: np.ndarray) -> np.ndarray:
    px, py = e[:, 0], e[:, 1]
    dx, dy = e[:, 2] - px, e[:, 3] - py
    fx, fy = px - c.center.x, py - c.center.y
    a = dx * dx + dy * dy
    b = 2.0 * (fx * dx + fy * dy)
    cc = fx * fx + fy * fy - c.radius * c.radius
    disc = b * b - 4 * a * cc
    tangent = (disc < 0) & (disc > -1e-12 * a)
    disc = np.where(tangent, 0.0, disc)
    ok = disc >= 0
    s = np.sqrt(np.where(ok, disc, 0.0))
    out = []
    for sign in (-1.0, 1.0):
        t = (-b + sign * s) / (2 * a)
        good = ok & (t >= -1e-12) & (t <= 1 + 1e-12)
        t = np.clip(t, 0.0, 1.0)
        out.append(np.column_stack([px + t * dx, py + t * dy])[good])
    return np.vstack(out)


def boundary_intersections(a, b) -> np.ndarray:
    """All points where the boundaries of two shapes meet, as an (k, 2) array."""
    if isinstance(a, Disk) and isinstance(b, Disk):
        try:
            pts = circle_circle_intersections(a, b)
        except ValueError:
            pts = []
        return np.array(pts, dtype=float).reshape(-1, 2)
    if isinstance(a, Disk):
        return _circle_vs_segments(a, b.edges)
    if isinstance(b, Disk):
        return _circle_vs_segments(b, a.edges)
    return _segments_vs_segments(a.edges, b.edges).reshape(-1, 2)


def shape_vertices(shape) -> np.ndarray:
    if isinstance(shape, Disk):
        return np.empty((0, 2))
    return shape.array
