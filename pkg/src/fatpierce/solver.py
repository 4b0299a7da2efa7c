"""Constructive piercing of r-fat families with the (2,2) or (4,3) property.

Pipeline: pick the farthest pair of witness centers (A, B), move to the frame
where c_B = (sqrt 8, 0) and c_A = (sqrt 8 - d, 0), branch on r and d, emit the
centers of a fixed disk cover (shifted vertically when needed), map back and
check that every set is hit.
"""
from __future__ import annotations

import math
from itertools import combinations
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import constants as K
from .fatsets import Family, FatSet, Mode
from .geometry import Point
from .pq import common_point, intersects

MEMBER_TOL = 1e-9
ENVELOPE_TOL = 1e-9


class SolverError(ValueError):
    pass


class NotIntersecting(SolverError):
    def __init__(self, pair, d):
        self.pair = pair
        super().__init__(f"not intersecting: witness centers {pair} are {d:.6g} apart")


class PropertyViolation(SolverError):
    """The input does not have the declared property; ``foursome`` proves it."""

    def __init__(self, foursome: tuple[int, ...], detail: str = ""):
        self.foursome = tuple(sorted(foursome))
        msg = f"input violates (4,3): sets {self.foursome}"
        super().__init__(msg + (f" ({detail})" if detail else ""))


class EnvelopeViolation(SolverError):
    pass


class ConstructionFailed(SolverError):
    def __init__(self, index: int, frame: "NormalizedFrame"):
        self.index = index
        self.frame = frame
        super().__init__(f"construction failed: set {index} not pierced (frame {frame})")


# --- frame ---------------------------------------------------------------------


@dataclass(frozen=True)
class NormalizedFrame:
    """Rigid motion p -> Rot(p - c_B) + (sqrt 8, 0), optionally followed by y -> -y."""

    a_index: int
    b_index: int
    d: float
    origin: Point          # c_B in input coordinates
    ux: float = 1.0        # unit vector from c_B towards c_A, input coordinates
    uy: float = 0.0
    reflect: bool = False

    @classmethod
    def build(cls, centers: np.ndarray, a: int, b: int) -> "NormalizedFrame":
        cb = Point(float(centers[b, 0]), float(centers[b, 1]))
        v = centers[a] - centers[b]
        d = float(math.hypot(v[0], v[1]))
        ux, uy = (float(v[0] / d), float(v[1] / d)) if d > 0 else (1.0, 0.0)
        return cls(a, b, d, cb, ux, uy)

    def forward(self, pts) -> np.ndarray:
        p = np.asarray(pts, dtype=float).reshape(-1, 2)
        dx, dy = p[:, 0] - self.origin.x, p[:, 1] - self.origin.y
        x = -self.ux * dx - self.uy * dy + K.SQRT8_F
        y = self.uy * dx - self.ux * dy
        if self.reflect:
            y = -y
        return np.column_stack([x, y])

    def inverse(self, pts) -> np.ndarray:
        p = np.asarray(pts, dtype=float).reshape(-1, 2)
        X = p[:, 0] - K.SQRT8_F
        Y = -p[:, 1] if self.reflect else p[:, 1]
        return np.column_stack([
            -self.ux * X + self.uy * Y + self.origin.x,
            -self.uy * X - self.ux * Y + self.origin.y,
        ])

    def flipped(self) -> "NormalizedFrame":
        return replace(self, reflect=not self.reflect)

    def swapped(self, centers: np.ndarray) -> "NormalizedFrame":
        return NormalizedFrame.build(centers, self.b_index, self.a_index)

    def to_doc(self) -> dict:
        return {"A": self.a_index, "B": self.b_index, "d": self.d, "reflect": self.reflect}


@dataclass(frozen=True)
class Decomposition43:
    a_index: int
    b_index: int
    f_b: tuple[int, ...]
    f_ab: tuple[int, ...]


CASE_IDS = ("C311", "C312", "C313", "C321", "C322", "GRID22", "GRID43", "SMALL", "EMPTY_FAB")


@dataclass
class PiercingResult:
    points: list[Point]
    bound_used: int
    case_id: str
    per_set_hit: list[int]
    frame: NormalizedFrame | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.case_id not in CASE_IDS:
            raise ValueError(f"unknown case id {self.case_id}")

    def to_doc(self) -> dict:
        return {
            "points": [[float(p.x), float(p.y)] for p in self.points],
            "bound_used": self.bound_used,
            "case_id": self.case_id,
            "per_set_hit": list(self.per_set_hit),
        }


# --- building blocks ---------------------------------------------------------------


def select_diameter_pair(f: Family | Sequence[FatSet]) -> NormalizedFrame:
    sets = f.sets if isinstance(f, Family) else tuple(f)
    if len(sets) < 2:
        raise ValueError("need at least two sets")
    c = np.array([s.center for s in sets], dtype=float)
    diff = c[:, None, :] - c[None, :, :]
    dd = np.hypot(diff[..., 0], diff[..., 1])
    iu = np.triu_indices(len(c), k=1)
    # argmax returns the first maximum; triu_indices enumerate pairs in
    # lexicographic order, so ties go to the smallest (i, j).
    k = int(np.argmax(dd[iu]))
    return NormalizedFrame.build(c, int(iu[0][k]), int(iu[1][k]))


def decompose_43(f: Family, frame: NormalizedFrame) -> tuple[Decomposition43, NormalizedFrame]:
    """Split F minus {A, B} by which of A and B each set meets.

    Returns the decomposition and the (possibly role-swapped) frame in which
    B meets every set other than A.
    """
    a, b = frame.a_index, frame.b_index
    A, B = f.sets[a], f.sets[b]
    if intersects(A, B):
        raise SolverError("anchors intersect; no decomposition needed")
    others = [i for i in range(len(f)) if i not in (a, b)]
    meet_a = {i: intersects(f.sets[i], A) for i in others}
    meet_b = {i: intersects(f.sets[i], B) for i in others}
    if not all(meet_b.values()):
        if all(meet_a.values()):
            frame = frame.swapped(f.centers)
            a, b = b, a
            meet_a, meet_b = meet_b, meet_a
        else:
            e = min(i for i in others if not meet_b[i])
            d_ = min(i for i in others if not meet_a[i])
            if d_ == e:
                extra = next(i for i in others if i != e)
                raise PropertyViolation((a, b, e, extra), f"set {e} misses both anchors")
            raise PropertyViolation((a, b, d_, e))
    f_b = tuple(i for i in others if not meet_a[i])
    f_ab = tuple(i for i in others if meet_a[i])
    return Decomposition43(a, b, f_b, f_ab), frame


def strip_shift(m_plus: float, m_minus: float) -> tuple[float, bool]:
    """Vertical shift a and reflection flag that put all centers in H(a, a-2)."""
    if m_minus > m_plus:
        raise ValueError("m_minus must not exceed m_plus")
    if m_plus > K.STRIP_TOP_F + ENVELOPE_TOL:
        raise EnvelopeViolation(f"strip-height envelope violated: m_plus={m_plus!r}")
    if m_plus >= 1.0:
        return m_plus, False
    if -m_minus >= 1.0:
        return -m_minus, True
    return 1.0, False


def grid_cover(r: float) -> list[Point]:
    """k*k centers of squares of side 2/k tiling [sqrt8-2, sqrt8] x [-1, 1], k = ceil(sqrt2/r)."""
    if not 0.0 < r <= 1.0:
        raise ValueError("r must lie in (0, 1]")
    k = grid_k(r)
    s = 2.0 / k
    x0 = K.SQRT8_F - 2.0
    return [Point(x0 + (i + 0.5) * s, -1.0 + (j + 0.5) * s) for i in range(k) for j in range(k)]


def grid_k(r: float) -> int:
    k = math.ceil(math.sqrt(2.0) / r)
    # guard against ceil landing one short through rounding of sqrt2/r
    while math.sqrt(2.0) / k > r:
        k += 1
    return k


def _shifted(points: Sequence[Point], a: float) -> np.ndarray:
    p = np.array(points, dtype=float).reshape(-1, 2)
    p[:, 1] += a - 1.0
    return p


def _assign(f: Family, pts: np.ndarray, frame) -> list[int]:
    hits = []
    for i, s in enumerate(f.sets):
        inside = s.contains_many(pts, MEMBER_TOL)
        if not inside.any():
            raise ConstructionFailed(i, frame)
        hits.append(int(np.argmax(inside)))
    return hits


def _result(f, pts: np.ndarray, bound: int, case: str, frame) -> PiercingResult:
    hits = _assign(f, pts, frame)
    return PiercingResult([Point(float(x), float(y)) for x, y in pts], bound, case, hits, frame)


def _check_envelope(ys: np.ndarray) -> None:
    if len(ys) and float(np.max(np.abs(ys))) > K.STRIP_TOP_F + ENVELOPE_TOL:
        raise EnvelopeViolation(f"frame height {float(np.max(np.abs(ys)))!r} exceeds sqrt(3.5)")


def _check_pairwise(centers: np.ndarray, idx: Sequence[int]) -> None:
    c = centers[list(idx)]
    if len(c) < 2:
        return
    diff = c[:, None, :] - c[None, :, :]
    dd = np.hypot(diff[..., 0], diff[..., 1])
    if dd.max() > 2.0 + ENVELOPE_TOL:
        i, j = np.unravel_index(int(np.argmax(dd)), dd.shape)
        raise SolverError(f"non-anchor centers {idx[i]} and {idx[j]} are more than 2 apart")


def _table_case_31(ys: np.ndarray) -> tuple[str, bool]:
    """Which four-disk table covers the centers, and whether to reflect first."""
    hi, lo = float(ys.max()), float(ys.min())
    if hi > 1.1:
        return "C311", False
    if lo < -1.1:
        return "C311", True
    if lo >= -1.0:
        return "C312", False
    if hi <= 1.0:
        return "C312", True
    raise SolverError(f"center heights {lo!r}..{hi!r} span more than 2")


# --- main entry ---------------------------------------------------------------------


def pierce(f: Family) -> PiercingResult:
    n = len(f)
    centers = f.centers
    if n <= 3:
        return _result(f, centers.copy(), n, "SMALL", None)
    frame = select_diameter_pair(f)
    d = frame.d
    if d == 0.0:
        return _result(f, centers[:1].copy(), 1, "SMALL", frame)
    if f.mode is Mode.P22 and d > 2.0 + ENVELOPE_TOL:
        raise NotIntersecting((frame.a_index, frame.b_index), d)

    r = f.r
    if f.mode is Mode.P43 and d > 2.0:
        dec, frame = decompose_43(f, frame)
        non_anchor = dec.f_b + dec.f_ab
        _check_pairwise(centers, non_anchor)
        c_a = centers[dec.a_index][None, :]
        if not dec.f_ab:
            p = common_point([f.sets[i] for i in (dec.b_index, *dec.f_b)])
            if p is None:
                raise PropertyViolation(_triple_witness(f, (dec.b_index, *dec.f_b)) + (dec.a_index,),
                                        "sets meeting B have no common point")
            return _result(f, np.vstack([np.array([p]), c_a]), 2, "EMPTY_FAB", frame)
        if r < K.R_MID_F:
            return _grid43(f, dec, frame)
        if d > K.SQRT8_F:
            fb_point = common_point([f.sets[i] for i in (dec.b_index, *dec.f_b)])
            if fb_point is None:
                raise PropertyViolation(_triple_witness(f, (dec.b_index, *dec.f_b)) + (dec.a_index,),
                                        "sets meeting B have no common point")
            extra = np.vstack([np.array([fb_point]), c_a])
            ys = frame.forward(centers[list(dec.f_ab)])[:, 1]
            _check_envelope(ys)
            if r >= K.R_BIG_F:
                pts = frame.inverse(np.array(K.C313.points))
                return _result(f, np.vstack([pts, extra]), 4, "C313", frame)
            a, refl = strip_shift(float(ys.max()), float(ys.min()))
            fr = frame.flipped() if refl else frame
            pts = fr.inverse(_shifted(K.C322.points, a))
            return _result(f, np.vstack([pts, extra]), 5, "C322", fr)

    # d <= sqrt8: every witness center lies in the lens region of the frame
    ys = frame.forward(centers)[:, 1]
    _check_envelope(ys)
    if r >= K.R_BIG_F:
        case, refl = _table_case_31(ys)
        fr = frame.flipped() if refl else frame
        table = K.C311 if case == "C311" else K.C312
        return _result(f, fr.inverse(np.array(table.points)), 4, case, fr)
    a, refl = strip_shift(float(ys.max()), float(ys.min()))
    fr = frame.flipped() if refl else frame
    if r >= K.R_MID_F:
        return _result(f, fr.inverse(_shifted(K.C321_FIXED.points, a)), 5, "C321", fr)
    grid = grid_cover(r)
    return _result(f, fr.inverse(_shifted(grid, a)), len(grid), "GRID22", fr)


def _grid43(f: Family, dec: Decomposition43, frame) -> PiercingResult:
    """Small r with disjoint anchors: grid-pierce the intersecting part F_AB + {A},
    then one common point for the sets meeting only B."""
    sub_idx = tuple(sorted(dec.f_ab + (dec.a_index,)))
    sub = f.subfamily(sub_idx, Mode.P22)
    inner = pierce(sub)
    p = common_point([f.sets[i] for i in (dec.b_index, *dec.f_b)])
    if p is None:
        raise PropertyViolation(_triple_witness(f, (dec.b_index, *dec.f_b)) + (dec.a_index,),
                                "sets meeting B have no common point")
    pts = np.vstack([np.array(inner.points, dtype=float), np.array([p])])
    k = grid_k(f.r)
    return _result(f, pts, k * k + 1, "GRID43", frame)


def _triple_witness(f: Family, idx: Sequence[int]) -> tuple[int, ...]:
    """Three sets among ``idx`` with empty common intersection (Helly), for error reports."""
    for t in combinations(idx, 3):
        if common_point([f.sets[i] for i in t]) is None:
            return tuple(t)
    return tuple(idx[:3])

