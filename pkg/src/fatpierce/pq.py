"""Intersection predicates, Helly-style common points and (p, q)-property checks."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .fatsets import Family, FatSet
from .geometry import (
    ConvexPolygon,
    Disk,
    Point,
    as_point,
    boundary_intersections,
    closest_point_on_segment,
    convex_intersect,
    dist,
    polygon_centroid,
    shape_vertices,
)

TOL = 1e-9


class ConvexityRequired(ValueError):
    def __init__(self, what: str = "convexity required"):
        super().__init__(what)


@dataclass(frozen=True)
class PQReport:
    holds: bool
    witness: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.holds != (self.witness is None):
            raise ValueError("witness must be present exactly when the property fails")


# --- pairs -----------------------------------------------------------------------


def _disk_polygon_point(disk: Disk, poly, tol: float) -> Point | None:
    o = disk.center
    if poly.contains(o):
        return o
    best, best_d = None, math.inf
    vs = poly.vertices
    for i in range(len(vs)):
        q = closest_point_on_segment(o, vs[i - 1], vs[i])
        dq = dist(q, o)
        if dq < best_d:
            best, best_d = q, dq
    return best if best_d <= disk.radius + tol else None


def _polygon_polygon_point(a, b, tol: float) -> Point | None:
    if isinstance(a, ConvexPolygon) and isinstance(b, ConvexPolygon):
        clip = convex_intersect(a, b)
        if clip.polygon is not None:
            return polygon_centroid(clip.polygon.vertices)
    for p, other in ((a.array, b), (b.array, a)):
        inside = other.contains_many(p, tol)
        if inside.any():
            return as_point(p[int(np.argmax(inside))])
    crossings = boundary_intersections(a, b)
    if len(crossings):
        return as_point(crossings[0])
    return None


def intersection_point(s: FatSet, t: FatSet, tol: float = TOL) -> Point | None:
    """Some point of S ∩ T (closed sets), or None when they are disjoint."""
    d = dist(s.center, t.center)
    if d > 2.0 + tol:
        return None
    if d <= s.core_radius + t.core_radius:
        w = s.core_radius / (s.core_radius + t.core_radius)
        return Point(s.center.x + w * (t.center.x - s.center.x),
                     s.center.y + w * (t.center.y - s.center.y))
    a, b = s.shape, t.shape
    if isinstance(a, Disk) and isinstance(b, Disk):
        dd = dist(a.center, b.center)
        if dd > a.radius + b.radius + tol:
            return None
        if dd == 0.0:
            return a.center
        lo, hi = max(0.0, dd - b.radius), min(dd, a.radius)
        u = 0.5 * (lo + hi) / dd
        return Point(a.center.x + u * (b.center.x - a.center.x),
                     a.center.y + u * (b.center.y - a.center.y))
    if isinstance(a, Disk):
        return _disk_polygon_point(a, b, tol)
    if isinstance(b, Disk):
        return _disk_polygon_point(b, a, tol)
    return _polygon_polygon_point(a, b, tol)


def intersects(s: FatSet, t: FatSet, tol: float = TOL) -> bool:
    return s is t or intersection_point(s, t, tol) is not None


# --- common points ----------------------------------------------------------------


def _violations(shapes, pts: np.ndarray) -> np.ndarray:
    """phi at each point: max over shapes of the signed violation."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    out = np.full(len(pts), -np.inf)
    for sh in shapes:
        if isinstance(sh, Disk):
            v = np.hypot(pts[:, 0] - sh.center.x, pts[:, 1] - sh.center.y) - sh.radius
        else:
            v = sh.violation_many(pts)
        np.maximum(out, v, out=out)
    return out


def _minimax(shapes, x0: np.ndarray) -> np.ndarray:
    """Minimize max_i g_i(x) in epigraph form (x, y, t) with SLSQP."""
    disks = [s for s in shapes if isinstance(s, Disk)]
    polys = [s for s in shapes if not isinstance(s, Disk)]
    if polys:
        normals = np.vstack([p.halfplanes[0] for p in polys])
        offsets = np.concatenate([p.halfplanes[1] for p in polys])
    else:
        normals, offsets = np.empty((0, 2)), np.empty(0)
    centers = np.array([d.center for d in disks], dtype=float).reshape(-1, 2)
    radii = np.array([d.radius for d in disks], dtype=float)

    def cons(z):
        x = z[:2]
        dd = np.sqrt(((x - centers) ** 2).sum(axis=1) + 1e-300)
        return np.concatenate([z[2] - (dd - radii), z[2] - (normals @ x - offsets)])

    def cons_jac(z):
        x = z[:2]
        diff = x - centers
        dd = np.sqrt((diff ** 2).sum(axis=1) + 1e-300)
        jd = np.column_stack([-diff / dd[:, None], np.ones(len(disks))])
        jp = np.column_stack([-normals, np.ones(len(normals))])
        return np.vstack([jd, jp])

    t0 = float(_violations(shapes, x0[None, :])[0])
    res = minimize(
        lambda z: z[2],
        np.array([x0[0], x0[1], t0]),
        jac=lambda z: np.array([0.0, 0.0, 1.0]),
        constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
        method="SLSQP",
        options={"ftol": 1e-14, "maxiter": 200},
    )
    return np.asarray(res.x[:2], dtype=float)


def candidate_array(sets: Sequence[FatSet]) -> np.ndarray:
    """Vertices, witness centers and all pairwise boundary crossings."""
    chunks = [np.array([s.center for s in sets], dtype=float).reshape(-1, 2)]
    for s in sets:
        chunks.append(shape_vertices(s.shape))
        if isinstance(s.shape, Disk):
            chunks.append(np.array([s.shape.center], dtype=float))
    for a, b in combinations(sets, 2):
        chunks.append(boundary_intersections(a.shape, b.shape))
    return np.vstack(chunks)


def common_point(sets: Sequence[FatSet], tol: float = TOL) -> Point | None:
    """A point in every (convex) set, or None when the intersection is empty.

    Cheap probes first, then an SLSQP minimax solve of phi(x) = max_i g_i(x);
    if that does not reach phi <= tol the boundary-crossing candidates decide,
    which is exact because a nonempty intersection of closed convex sets
    contains a vertex, a boundary crossing, or an entire member.
    """
    sets = list(sets)
    if not sets:
        raise ValueError("need at least one set")
    if not all(s.is_convex for s in sets):
        raise ConvexityRequired()
    shapes = [s.shape for s in sets]
    centers = np.array([s.center for s in sets], dtype=float)
    probes = np.vstack([centers.mean(axis=0, keepdims=True), centers])
    phi = _violations(shapes, probes)
    if phi.min() <= 0.0:
        return as_point(probes[int(np.argmin(phi))])
    x = _minimax(shapes, probes[0])
    if _violations(shapes, x[None, :])[0] <= tol:
        return as_point(x)
    cands = candidate_array(sets)
    phi = _violations(shapes, cands)
    i = int(np.argmin(phi))
    if phi[i] <= tol:
        return as_point(cands[i])
    return None


def intersection_depth(sets: Sequence[FatSet], target: float | None = None) -> float:
    """An upper bound on min_x max_i g_i(x).

    A value <= -m proves that the sets share a disk of radius m; positive
    values mean only that the solver found no common point.  With ``target``
    the solver is skipped as soon as a probe point already reaches it.
    """
    sets = list(sets)
    if not all(s.is_convex for s in sets):
        raise ConvexityRequired()
    shapes = [s.shape for s in sets]
    centers = np.array([s.center for s in sets], dtype=float)
    probes = np.vstack([centers.mean(axis=0, keepdims=True), centers])
    best = float(_violations(shapes, probes).min())
    if target is not None and best <= target:
        return best
    x = _minimax(shapes, probes[0])
    return min(best, float(_violations(shapes, x[None, :])[0]))


# --- cached intersection structure for a whole family -----------------------------


class IntersectionCache:
    """Lazily computed pair/triple intersection facts for one family.

    Points already known to lie in many sets are kept as probes with a bitmask
    per set, so most triple tests reduce to an AND of three integers.
    """

    def __init__(self, sets: Sequence[FatSet] | Family, tol: float = TOL):
        self.sets = list(sets.sets if isinstance(sets, Family) else sets)
        self.n = len(self.sets)
        self.tol = tol
        self._pair: dict[tuple[int, int], Point | None] = {}
        self._triple: dict[tuple[int, int, int], bool] = {}
        self._probes: list[Point] = []
        self._masks = [0] * self.n
        self._probes_ready = False

    def pair_point(self, i: int, j: int) -> Point | None:
        if i == j:
            return self.sets[i].center
        key = (i, j) if i < j else (j, i)
        if key not in self._pair:
            self._pair[key] = intersection_point(self.sets[key[0]], self.sets[key[1]], self.tol)
        return self._pair[key]

    def meets(self, i: int, j: int) -> bool:
        return self.pair_point(i, j) is not None

    def pair_matrix(self) -> np.ndarray:
        m = np.eye(self.n, dtype=bool)
        for i, j in combinations(range(self.n), 2):
            m[i, j] = m[j, i] = self.meets(i, j)
        return m

    def _add_probes(self, pts) -> None:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        if not len(pts):
            return
        base = len(self._probes)
        self._probes.extend(as_point(p) for p in pts)
        weights = [1 << (base + k) for k in range(len(pts))]
        for s_idx, s in enumerate(self.sets):
            inside = s.contains_many(pts, self.tol)
            self._masks[s_idx] |= sum(w for w, ok in zip(weights, inside) if ok)

    def _ensure_probes(self) -> None:
        if self._probes_ready:
            return
        self._probes_ready = True
        pts = [s.center for s in self.sets]
        for i, j in combinations(range(self.n), 2):
            p = self.pair_point(i, j)
            if p is not None:
                pts.append(p)
        self._add_probes(pts)

    def triple(self, i: int, j: int, k: int) -> bool:
        key = tuple(sorted((i, j, k)))
        if key in self._triple:
            return self._triple[key]
        a, b, c = key
        if len({a, b, c}) < 3:
            ok = all(self.meets(u, v) for u, v in combinations(key, 2))
        elif not (self.meets(a, b) and self.meets(a, c) and self.meets(b, c)):
            ok = False
        else:
            self._ensure_probes()
            if self._masks[a] & self._masks[b] & self._masks[c]:
                ok = True
            else:
                p = common_point([self.sets[a], self.sets[b], self.sets[c]], self.tol)
                ok = p is not None
                if ok:
                    self._add_probes([p])
        self._triple[key] = ok
        return ok

    def q_intersects(self, idx: Sequence[int]) -> bool:
        """Whether the sets ``idx`` share a point (pairs directly, larger via triples)."""
        idx = tuple(idx)
        if len(idx) == 1:
            return True
        if len(idx) == 2:
            return self.meets(*idx)
        if not all(self.sets[i].is_convex for i in idx):
            raise ConvexityRequired()
        return all(self.triple(*t) for t in combinations(idx, 3))


def _sets_of(f) -> list[FatSet]:
    return list(f.sets if isinstance(f, Family) else f)


def has_pq_property(f, p: int, q: int, cache: IntersectionCache | None = None) -> PQReport:
    """Exhaustive (p, q) check; the witness is the lexicographically first failing p-subset."""
    sets = _sets_of(f)
    if not 2 <= q <= p:
        raise ValueError(f"need 2 <= q <= p, got p={p}, q={q}")
    if q >= 3 and not all(s.is_convex for s in sets):
        raise ConvexityRequired()
    n = len(sets)
    if n < p:
        return PQReport(True)
    cache = cache or IntersectionCache(sets)
    chosen: list[int] = []

    def extend(start: int) -> tuple[int, ...] | None:
        if len(chosen) == p:
            return tuple(chosen)
        for e in range(start, n - (p - len(chosen)) + 1):
            if len(chosen) >= q - 1 and any(
                cache.q_intersects(sub + (e,)) for sub in combinations(chosen, q - 1)
            ):
                continue
            chosen.append(e)
            found = extend(e + 1)
            chosen.pop()
            if found is not None:
                return found
        return None

    witness = extend(0)
    return PQReport(witness is None, witness)


MATCHING_LIMIT = 20


def matching_number(f, cache: IntersectionCache | None = None) -> int:
    """Maximum number of pairwise disjoint members (exhaustive, n <= 20)."""
    sets = _sets_of(f)
    n = len(sets)
    if n > MATCHING_LIMIT:
        raise ValueError(f"matching_number is exhaustive; at most {MATCHING_LIMIT} sets, got {n}")
    cache = cache or IntersectionCache(sets)
    nbr = [0] * n
    for i, j in combinations(range(n), 2):
        if cache.meets(i, j):
            nbr[i] |= 1 << j
            nbr[j] |= 1 << i
    best = 0

    def grow(cand: int, size: int) -> None:
        nonlocal best
        if size + bin(cand).count("1") <= best:
            return
        if not cand:
            best = size
            return
        v = (cand & -cand).bit_length() - 1
        grow(cand & ~nbr[v] & ~(1 << v), size + 1)
        grow(cand & ~(1 << v), size)

    grow((1 << n) - 1, 0)
    return best
