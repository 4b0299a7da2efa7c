"""Exact piercing numbers of small families.

Candidate points are every boundary/boundary intersection, every polygon vertex
and every witness center.  The piercing number is then an exact set-cover
problem over those candidates.  A dense-grid version of the same cover problem
serves as an independent check of candidate completeness.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .fatsets import Family
from .geometry import Point, boundary_intersections, shape_vertices

ORACLE_LIMIT = 10
MEMBER_TOL = 1e-9
DEDUP_TOL = 1e-9


class OracleLimit(ValueError):
    pass


def _check_size(f: Family):
    if len(f) > ORACLE_LIMIT:
        raise OracleLimit(f"oracle handles at most {ORACLE_LIMIT} sets, got {len(f)}")


@dataclass(frozen=True)
class CandidateSet:
    points: np.ndarray            # (k, 2)
    provenance: tuple[str, ...]   # "circle-circle", "circle-edge", "edge-edge", "vertex", "center"

    def __len__(self) -> int:
        return len(self.points)


def _pair_kind(a, b) -> str:
    da, db = a.__class__.__name__ == "Disk", b.__class__.__name__ == "Disk"
    if da and db:
        return "circle-circle"
    if da or db:
        return "circle-edge"
    return "edge-edge"


def candidate_points(f: Family) -> CandidateSet:
    _check_size(f)
    chunks, prov = [], []
    for a, b in combinations(f.sets, 2):
        pts = boundary_intersections(a.shape, b.shape)
        chunks.append(pts)
        prov += [_pair_kind(a.shape, b.shape)] * len(pts)
    for s in f.sets:
        v = shape_vertices(s.shape)
        chunks.append(v)
        prov += ["vertex"] * len(v)
    chunks.append(f.centers)
    prov += ["center"] * len(f)
    pts = np.vstack([c.reshape(-1, 2) for c in chunks])
    keep = _dedupe(pts, DEDUP_TOL)
    return CandidateSet(pts[keep], tuple(prov[i] for i in keep))


def _dedupe(pts: np.ndarray, tol: float) -> list[int]:
    """First occurrence of each point up to ``tol`` (input order preserved)."""
    keep: list[int] = []
    kept = np.empty((0, 2))
    for i, p in enumerate(pts):
        if len(kept) and (np.abs(kept - p).max(axis=1) <= tol).any():
            continue
        keep.append(i)
        kept = np.vstack([kept, p])
    return keep


# --- set cover ---------------------------------------------------------------------


def membership_masks(f: Family, pts: np.ndarray, tol: float = MEMBER_TOL) -> np.ndarray:
    masks = np.zeros(len(pts), dtype=np.int64)
    for i, s in enumerate(f.sets):
        masks |= s.contains_many(pts, tol).astype(np.int64) << i
    return masks


def _reduce(masks: np.ndarray) -> list[int]:
    """Indices of candidates whose mask is nonzero, unique and not dominated."""
    first: dict[int, int] = {}
    for i, m in enumerate(masks.tolist()):
        if m and m not in first:
            first[m] = i
    uniq = list(first.items())
    out = []
    for m, i in uniq:
        if not any(o != m and (o & m) == m for o, _ in uniq):
            out.append(i)
    return sorted(out)


def _greedy(masks: list[int], full: int) -> list[int]:
    chosen, covered = [], 0
    while covered != full:
        best = max(range(len(masks)), key=lambda j: (bin(masks[j] & ~covered).count("1"), -j))
        if masks[best] & ~covered == 0:
            raise ValueError("some set contains no candidate point")
        chosen.append(best)
        covered |= masks[best]
    return chosen


def min_cover_size(masks: list[int], n: int) -> int:
    """Exact minimum number of masks whose union is all n bits (branch and bound)."""
    full = (1 << n) - 1
    best = [len(_greedy(masks, full))]
    by_set = [[j for j, m in enumerate(masks) if m >> i & 1] for i in range(n)]

    def rec(covered: int, used: int):
        if covered == full:
            best[0] = min(best[0], used)
            return
        if used + 1 >= best[0]:
            return
        # branch on the uncovered set with the fewest covering candidates
        i = min((k for k in range(n) if not covered >> k & 1), key=lambda k: (len(by_set[k]), k))
        # lower bound: the largest candidate still has to cover the rest
        rest = bin(full & ~covered).count("1")
        widest = max(bin(masks[j] & ~covered).count("1") for j in range(len(masks)))
        if used + -(-rest // widest) >= best[0]:
            return
        for j in sorted(by_set[i], key=lambda j: (-bin(masks[j] & ~covered).count("1"), j)):
            rec(covered | masks[j], used + 1)

    rec(0, 0)
    return best[0]


def lex_least_cover(masks: list[int], n: int, size: int) -> list[int]:
    """Lexicographically smallest index tuple of the given size covering all n bits."""
    full = (1 << n) - 1
    m = len(masks)
    # suffix unions let us prune branches that can no longer cover everything
    suffix = [0] * (m + 1)
    for j in range(m - 1, -1, -1):
        suffix[j] = suffix[j + 1] | masks[j]

    def rec(start: int, covered: int, left: int, acc: list[int]):
        if covered == full:
            return acc
        if left == 0 or (covered | suffix[start]) != full:
            return None
        for j in range(start, m):
            if (covered | suffix[j]) != full:
                return None
            if masks[j] & ~covered == 0:
                continue
            got = rec(j + 1, covered | masks[j], left - 1, acc + [j])
            if got is not None:
                return got
        return None

    out = rec(0, 0, size, [])
    if out is None:
        raise ValueError("no cover of the requested size")
    return out


def _solve(f: Family, pts: np.ndarray) -> tuple[int, list[Point]]:
    n = len(f)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    masks = membership_masks(f, pts)
    keep = _reduce(masks)
    red = [int(masks[i]) for i in keep]
    if ((np.bitwise_or.reduce(np.array(red, dtype=np.int64)) if red else 0)) != (1 << n) - 1:
        raise ValueError("some set contains no candidate point")
    tau = min_cover_size(red, n)
    idx = lex_least_cover(red, n, tau)
    return tau, [Point(float(pts[keep[j], 0]), float(pts[keep[j], 1])) for j in idx]


def exact_piercing_number(f: Family) -> tuple[int, list[Point]]:
    """(tau, an optimal piercing set), the set being lexicographically least
    among optimal sets of the deduplicated, dominance-reduced candidates."""
    _check_size(f)
    return _solve(f, candidate_points(f).points)


def sampling_fallback_tau(f: Family, grid_step: float = 0.01) -> int:
    """Set-cover optimum over a dense grid on the union's bounding box."""
    _check_size(f)
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    boxes = np.array([s.shape.bbox() for s in f.sets])
    x0, y0 = boxes[:, 0].min(), boxes[:, 1].min()
    x1, y1 = boxes[:, 2].max(), boxes[:, 3].max()
    xs = np.arange(x0, x1 + grid_step, grid_step)
    ys = np.arange(y0, y1 + grid_step, grid_step)
    X, Y = np.meshgrid(xs, ys)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    masks = membership_masks(f, pts, 0.0)
    uniq = np.unique(masks[masks != 0])
    red = _reduce(uniq)
    red_masks = [int(uniq[i]) for i in red]
    full = (1 << len(f)) - 1
    if not red_masks or np.bitwise_or.reduce(np.array(red_masks, dtype=np.int64)) != full:
        raise ValueError("grid too coarse: some set contains no grid point")
    return min_cover_size(red_masks, len(f))
