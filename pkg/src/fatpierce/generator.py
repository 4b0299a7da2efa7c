"""Seeded random r-fat families with the (2,2) or (4,3) property.

Every set is built around its witness center c: either a disk (possibly
off-center) or a convex polygon whose vertices lie on the unit circle about c
with an apothem of at least r.  Families are validated with the exact
(p, q) checker before they are returned.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fatsets import Family, FatSet, Mode, verify_fatness
from .geometry import ConvexPolygon, Disk, Point
from .pq import has_pq_property, intersection_depth, intersects

MAX_RETRIES = 100
STYLES = ("auto", "hub", "greedy", "anchored")


class GenerationFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class GenSpec:
    n: int
    r: float
    mode: Mode = Mode.P22
    shape_mix: float = 0.5          # probability that a set is a polygon
    seed: int = 0
    style: str = "auto"
    anchor_distance: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0.0 < self.r <= 1.0:
            raise ValueError(f"r must lie in (0, 1], got {self.r}")
        if not 0.0 <= self.shape_mix <= 1.0:
            raise ValueError("shape_mix must lie in [0, 1]")
        if self.style not in STYLES:
            raise ValueError(f"style must be one of {STYLES}")
        if self.anchor_distance is not None and not 2.0 < self.anchor_distance <= 4.0:
            raise ValueError("anchor_distance must lie in (2, 4]")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


# --- single sets --------------------------------------------------------------------


def _margin(r: float) -> float:
    return 0.05 * r


def _fat_polygon(rng: np.random.Generator, c, r: float) -> ConvexPolygon | None:
    """Jittered polygon inscribed in B(c, 1) with inradius about c at least r."""
    k_min = 3
    while math.cos(math.pi / k_min) < r + 0.02:
        k_min += 1
        if k_min > 24:
            return None
    k = int(rng.integers(k_min, k_min + 5))
    jitter = 0.5 * (math.pi / k) * (1 - (r + 0.02) / math.cos(math.pi / k)) if k > 2 else 0.0
    base = rng.uniform(0, 2 * math.pi)
    ang = base + 2 * math.pi * np.arange(k) / k + rng.uniform(-jitter, jitter, k)
    verts = [Point(float(c[0] + math.cos(a)), float(c[1] + math.sin(a))) for a in np.sort(ang)]
    poly = ConvexPolygon(tuple(verts))
    # vertices on the unit circle can land a hair outside after rounding
    if not verify_fatness(poly, c, r):
        return None
    return poly


def _fat_set(rng, c, r: float, polygon: bool, must_contain=None) -> FatSet | None:
    c = Point(float(c[0]), float(c[1]))
    if polygon:
        shape = _fat_polygon(rng, c, r)
        if shape is None:
            return None
    else:
        rho = float(rng.uniform(r, 1.0))
        # shift the disk inside the annulus allowed by fatness
        slack = min(rho - r, 1.0 - rho)
        t, a = float(rng.uniform(0, slack)), float(rng.uniform(0, 2 * math.pi))
        shape = Disk(Point(c.x + t * math.cos(a), c.y + t * math.sin(a)), rho)
        if not verify_fatness(shape, c, r):
            shape = Disk(c, rho)
    if must_contain is not None and not shape.contains(must_contain, -_margin(r)):
        return None
    return FatSet(shape, c, r)


def _sample_around(rng, h, radius: float):
    a = rng.uniform(0, 2 * math.pi)
    t = radius * math.sqrt(rng.uniform())
    return (h[0] + t * math.cos(a), h[1] + t * math.sin(a))


def _hub_member(rng, h, r, polygon, extra=None) -> FatSet:
    while True:
        s = _fat_set(rng, _sample_around(rng, h, 1.0 - _margin(r)), r, polygon, must_contain=h)
        if s is not None and (extra is None or extra(s)):
            return s


# --- families -----------------------------------------------------------------------


def _hub_family(rng, spec: GenSpec) -> list[FatSet]:
    h = (0.0, 0.0)
    return [_hub_member(rng, h, spec.r, rng.uniform() < spec.shape_mix) for _ in range(spec.n)]


def _greedy_family(rng, spec: GenSpec) -> list[FatSet]:
    """Centers spread over B(0, 1); each new set must share a disk of radius
    0.05 r with every earlier one, so no pair is tangency-degenerate."""
    out: list[FatSet] = []
    tries = 0
    while len(out) < spec.n:
        tries += 1
        if tries > 200 * spec.n:
            raise GenerationFailed("greedy placement stalled")
        s = _fat_set(rng, _sample_around(rng, (0.0, 0.0), 1.0), spec.r, rng.uniform() < spec.shape_mix)
        if s is not None and all(intersection_depth([s, t], -_margin(spec.r)) <= -_margin(spec.r) for t in out):
            out.append(s)
    return out


def _anchored_family(rng, spec: GenSpec) -> list[FatSet]:
    """Disjoint anchors A, B at distance d; every other set contains a hub in B."""
    d = spec.anchor_distance if spec.anchor_distance is not None else float(rng.uniform(2.05, 3.95))
    r = spec.r
    c_a, c_b = np.array([0.0, 0.0]), np.array([d, 0.0])
    poly = lambda: rng.uniform() < spec.shape_mix  # noqa: E731
    a = b = None
    while a is None:
        a = _fat_set(rng, c_a, r, poly())
    while b is None:
        b = _fat_set(rng, c_b, r, poly())
    if intersects(a, b):
        raise GenerationFailed("anchors meet")
    # hub inside B, pushed toward A so that some members can reach A as well
    hub = c_b + (r - 2 * _margin(r)) * np.array([-1.0, float(rng.uniform(-0.3, 0.3))]) / math.hypot(1, 0.3)
    hub = (float(hub[0]), float(hub[1]))

    def in_lens(s: FatSet) -> bool:
        c = np.array(s.center)
        return np.linalg.norm(c - c_a) <= d and np.linalg.norm(c - c_b) <= d

    rest = [_hub_member(rng, hub, r, poly(), in_lens) for _ in range(spec.n - 2)]
    return [a, b] + rest


def _build(rng, spec: GenSpec) -> list[FatSet]:
    style = spec.style
    if style == "auto":
        if spec.mode is Mode.P43 and spec.n >= 2:
            style = ("hub", "greedy", "anchored", "anchored")[int(rng.integers(4))]
        else:
            style = ("hub", "greedy")[int(rng.integers(2))]
    if style == "anchored":
        if spec.n < 2:
            raise ValueError("anchored families need n >= 2")
        return _anchored_family(rng, spec)
    if style == "greedy":
        return _greedy_family(rng, spec)
    return _hub_family(rng, spec)


def generate(spec: GenSpec) -> Family:
    """Deterministic in ``spec``; raises GenerationFailed after 100 rejected families."""
    rng = np.random.default_rng(spec.seed)
    p, q = (2, 2) if spec.mode is Mode.P22 else (4, 3)
    for _ in range(MAX_RETRIES):
        try:
            sets = _build(rng, spec)
        except GenerationFailed:
            continue
        fam = Family(tuple(sets), spec.r, spec.mode)
        if all(verify_fatness(s.shape, s.center, spec.r) for s in sets) and has_pq_property(fam, p, q).holds:
            return fam
    raise GenerationFailed(f"no valid family after {MAX_RETRIES} attempts for {spec}")


def scatter_family(n: int, r: float, seed: int, box: float = 4.0, shape_mix: float = 0.5,
                   mode: Mode = Mode.P22) -> Family:
    """Fat sets with witness centers uniform in [0, box]^2 and no (p, q) guarantee.

    Used by property tests that need disjoint members as well as meeting ones.
    """
    rng = np.random.default_rng(seed)
    sets: list[FatSet] = []
    while len(sets) < n:
        c = rng.uniform(0.0, box, 2)
        s = _fat_set(rng, c, r, rng.uniform() < shape_mix)
        if s is not None:
            sets.append(s)
    return Family(tuple(sets), r, mode)
