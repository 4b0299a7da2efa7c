"""r-fat sets, families, and the JSON family document.

A set S is r-fat with witness c when B(c, r) is inside S and S is inside B(c, 1).
Witnesses are stored with the shape and checked on load; nothing downstream
recomputes them.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .geometry import (
    ConvexPolygon,
    Disk,
    Point,
    SimplePolygon,
    as_point,
    dist,
    is_strictly_convex_ccw,
    point_in_polygon,
)

Shape = Union[Disk, ConvexPolygon, SimplePolygon]

EPS_FAT = 1e-9
DOC_VERSION = 1


class Mode(str, enum.Enum):
    P22 = "22"
    P43 = "43"


class FamilyFormatError(ValueError):
    """A family document is malformed; ``index`` names the offending set, if any."""

    def __init__(self, message: str, index: int | None = None):
        self.index = index
        where = "" if index is None else f"set {index}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class FatSet:
    shape: Shape
    center: Point
    core_radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))

    @property
    def is_convex(self) -> bool:
        return self.shape.is_convex

    def contains(self, p, tol: float = 0.0) -> bool:
        return self.shape.contains(p, tol)

    def contains_many(self, pts, tol: float = 0.0) -> np.ndarray:
        return self.shape.contains_many(pts, tol)


@dataclass(frozen=True)
class Family:
    sets: tuple[FatSet, ...]
    r: float
    mode: Mode

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(self.sets))
        object.__setattr__(self, "mode", Mode(self.mode))
        if not self.sets:
            raise FamilyFormatError("family must contain at least one set")
        if not 0.0 < self.r <= 1.0:
            raise FamilyFormatError(f"r must lie in (0, 1], got {self.r}")
        for i, s in enumerate(self.sets):
            if s.core_radius < self.r - EPS_FAT:
                raise FamilyFormatError(f"core radius {s.core_radius} below family r={self.r}", i)
            if self.mode is Mode.P43 and not s.is_convex:
                raise FamilyFormatError("convexity required for mode 43", i)

    def __len__(self) -> int:
        return len(self.sets)

    def __getitem__(self, i) -> FatSet:
        return self.sets[i]

    @property
    def centers(self) -> np.ndarray:
        return np.array([s.center for s in self.sets], dtype=float).reshape(-1, 2)

    def subfamily(self, indices, mode: Mode | None = None) -> "Family":
        return Family(tuple(self.sets[i] for i in indices), self.r, mode or self.mode)


def verify_fatness(shape: Shape, c, r: float, eps: float = EPS_FAT) -> bool:
    """True iff B(c, r) lies in ``shape`` and ``shape`` lies in B(c, 1), up to ``eps``."""
    if not 0.0 < r <= 1.0:
        raise ValueError(f"r must lie in (0, 1], got {r}")
    c = as_point(c)
    if isinstance(shape, Disk):
        off = dist(c, shape.center)
        return off <= shape.radius - r + eps and off + shape.radius <= 1.0 + eps
    if isinstance(shape, (ConvexPolygon, SimplePolygon)):
        if not point_in_polygon(c, shape):
            return False
        if shape.boundary_distance(c) < r - eps:
            return False
        return all(dist(c, v) <= 1.0 + eps for v in shape.vertices)
    raise TypeError(f"unsupported shape {type(shape).__name__}")


def _achieved_radius(shape: Shape, c) -> float:
    """Largest r for which c is a witness, or -inf if the outer condition fails."""
    if isinstance(shape, Disk):
        off = dist(c, shape.center)
        return shape.radius - off if off + shape.radius <= 1.0 else -math.inf
    if max(dist(c, v) for v in shape.vertices) > 1.0:
        return -math.inf
    if not point_in_polygon(c, shape):
        return -math.inf
    return shape.boundary_distance(c)


def certify_fatness(shape: Shape, r_target: float, grid: int = 41):
    """Search for a fatness witness reaching ``r_target``.

    Returns ``(center, r_achieved)`` or None.  None does not prove the shape
    is not r-fat; the search is a grid scan plus a compass-search polish.
    """
    if isinstance(shape, Disk):
        if shape.radius <= 1.0 + EPS_FAT and shape.radius >= r_target and shape.radius > 0:
            return shape.center, min(shape.radius, 1.0)
        return None
    x0, y0, x1, y1 = shape.bbox()
    best, best_c = -math.inf, None
    for x in np.linspace(x0, x1, grid):
        for y in np.linspace(y0, y1, grid):
            val = _achieved_radius(shape, (x, y))
            if val > best:
                best, best_c = val, (float(x), float(y))
    if best_c is None or best == -math.inf:
        return None
    step = max(x1 - x0, y1 - y0) / (grid - 1)
    dirs = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]
    while step > 1e-10:
        moved = False
        for dx, dy in dirs:
            cand = (best_c[0] + dx * step, best_c[1] + dy * step)
            val = _achieved_radius(shape, cand)
            if val > best:
                best, best_c, moved = val, cand, True
                break
        if not moved:
            step *= 0.5
    r_ach = min(best, 1.0)
    if r_ach < r_target or r_ach <= 0.0 or not verify_fatness(shape, best_c, r_ach):
        return None
    return Point(*best_c), r_ach


# --- documents ----------------------------------------------------------------


def _shape_to_doc(shape: Shape) -> dict:
    if isinstance(shape, Disk):
        return {"kind": "disk", "center": list(shape.center), "radius": shape.radius}
    return {
        "kind": "polygon",
        "convex": shape.is_convex,
        "vertices": [list(v) for v in shape.vertices],
    }


def _shape_from_doc(doc: dict, index: int) -> Shape:
    try:
        kind = doc["kind"]
        if kind == "disk":
            return Disk(as_point(doc["center"]), float(doc["radius"]))
        if kind == "polygon":
            verts = tuple(as_point(v) for v in doc["vertices"])
            convex = doc.get("convex")
            if convex is None:
                convex = is_strictly_convex_ccw(verts)
            return ConvexPolygon(verts) if convex else SimplePolygon(verts)
    except FamilyFormatError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FamilyFormatError(f"bad shape: {exc}", index) from None
    raise FamilyFormatError(f"unknown shape kind {kind!r}", index)


def save_family(family: Family) -> dict:
    return {
        "version": DOC_VERSION,
        "r": family.r,
        "mode": family.mode.value,
        "sets": [
            {
                "shape": _shape_to_doc(s.shape),
                "witness": {"center": list(s.center), "core_radius": s.core_radius},
            }
            for s in family.sets
        ],
    }


def load_family(doc: dict) -> Family:
    if not isinstance(doc, dict):
        raise FamilyFormatError("document must be an object")
    try:
        version = doc["version"]
        r = float(doc["r"])
        mode = Mode(str(doc["mode"]))
        raw_sets = doc["sets"]
    except (KeyError, ValueError, TypeError) as exc:
        raise FamilyFormatError(f"schema violation: {exc}") from None
    if version != DOC_VERSION:
        raise FamilyFormatError(f"unsupported document version {version!r}")
    if not isinstance(raw_sets, list) or not raw_sets:
        raise FamilyFormatError("'sets' must be a non-empty list")
    sets = []
    for i, item in enumerate(raw_sets):
        if not isinstance(item, dict) or "shape" not in item or "witness" not in item:
            raise FamilyFormatError("each set needs 'shape' and 'witness'", i)
        shape = _shape_from_doc(item["shape"], i)
        if mode is Mode.P43 and not shape.is_convex:
            raise FamilyFormatError("convexity required for mode 43", i)
        try:
            c = as_point(item["witness"]["center"])
            core = float(item["witness"]["core_radius"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FamilyFormatError(f"bad witness: {exc}", i) from None
        if core < r - EPS_FAT:
            raise FamilyFormatError(f"core radius {core} below family r={r}", i)
        try:
            ok = verify_fatness(shape, c, core)
        except ValueError as exc:
            raise FamilyFormatError(str(exc), i) from None
        if not ok:
            raise FamilyFormatError("fatness witness check failed", i)
        sets.append(FatSet(shape, c, core))
    return Family(tuple(sets), r, mode)


def dumps(doc: dict) -> str:
    """Canonical text form used for every emitted document."""
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def read_family(path) -> Family:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FamilyFormatError(f"not valid JSON: {exc}") from None
    return load_family(doc)


def write_family(family: Family, path) -> None:
    Path(path).write_text(dumps(save_family(family)))
