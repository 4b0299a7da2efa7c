"""Certified "region is inside a union of disks" checks by interval subdivision.

A claim is a closed region (possibly depending on a parameter d ranging over an
interval) and a list of cover disks.  The region is split into convex pieces and
each piece is explored with a quadtree in (x, y) and bisection in d.  A cell is
discharged when interval arithmetic proves it misses the piece, or proves the
part of it inside the piece lies in the cover.  Cells that shrink below
``delta_min`` are checked at sample points (a hit outside every disk refutes
the claim), then either matched to a registered exact tangency or left
inconclusive.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np
import sympy as sp

from . import __version__
from . import constants as K
from . import regions as RG
from .geometry import ROUNDING_MODE, Interval, circle_circle_intersections, Disk, Point

CONFIRMED, REFUTED, INCONCLUSIVE = "Confirmed", "Refuted", "Inconclusive"
TANGENCY_RADIUS = 10.0       # in units of delta_min
TANGENCY_FLOAT_TOL = 1e-9
LAMBDAS = (0.25, 0.5, 0.75)
MUS = (0.5, 1.0)

_NINF, _PINF = -np.inf, np.inf


# --- vectorized interval arithmetic (ulp padding after every operation) -------


def _dn(a):
    return np.nextafter(a, _NINF)


def _up(a):
    return np.nextafter(a, _PINF)


def _iadd(a, b):
    return _dn(a[0] + b[0]), _up(a[1] + b[1])


def _isub(a, b):
    return _dn(a[0] - b[1]), _up(a[1] - b[0])


def _imul(a, b):
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return _dn(np.minimum(np.minimum(p[0], p[1]), np.minimum(p[2], p[3]))), _up(
        np.maximum(np.maximum(p[0], p[1]), np.maximum(p[2], p[3])))


def _isqr(a):
    lo, hi = a
    alo, ahi = np.abs(lo), np.abs(hi)
    straddle = (lo <= 0.0) & (hi >= 0.0)
    low = np.where(straddle, 0.0, np.minimum(alo, ahi) ** 2)
    return np.maximum(0.0, _dn(low)), _up(np.maximum(alo, ahi) ** 2)


def _iscale(s: float, a):
    """s * a for an exact float s >= 0."""
    return _dn(s * a[0]), _up(s * a[1])


def _affine(coef, dl, dh):
    """a + b*D for coef = (a_lo, a_hi, b_lo, b_hi) and D = [dl, dh]."""
    a = (coef[0], coef[1])
    b = (np.full_like(dl, coef[2]), np.full_like(dl, coef[3]))
    if coef[2] == 0.0 and coef[3] == 0.0:
        return np.full_like(dl, coef[0]), np.full_like(dl, coef[1])
    return _iadd(a, _imul(b, (dl, dh)))


def _coef(aff: RG.Affine) -> tuple[float, float, float, float]:
    return (aff.ia.lo, aff.ia.hi, aff.ib.lo, aff.ib.hi)


# --- claims -------------------------------------------------------------------


@dataclass(frozen=True)
class CoverClaim:
    id: str
    region: RG.Region
    centers: tuple            # exact (x, y) pairs
    radius: sp.Expr           # common exact radius
    d_lo: sp.Expr
    d_hi: sp.Expr
    title: str = ""
    depth: int = 14           # default refinement budget for this claim
    delta_min: float = 2.0 ** -12

    @property
    def fixed_d(self) -> bool:
        return sp.simplify(self.d_hi - self.d_lo) == 0

    @property
    def disks(self) -> list[Disk]:
        r = K.to_float(self.radius)
        return [Disk(Point(K.to_float(x), K.to_float(y)), r) for x, y in self.centers]

    @property
    def d_range(self) -> tuple[float, float]:
        return K.to_float(self.d_lo), K.to_float(self.d_hi)


def _claim(cid, region, table, d_lo, d_hi, title):
    return CoverClaim(cid, region, table.centers, table.radius, sp.sympify(d_lo), sp.sympify(d_hi), title)


def claim_f1() -> CoverClaim:
    return _claim("F1", RG.Intersect((RG.lens_envelope(), RG.HalfPlaneUp(RG.Affine.of(sp.Rational(-9, 10))))),
                  K.C311, K.SQRT8, K.SQRT8, "lens above y = -0.9, four disks")


def claim_f2() -> CoverClaim:
    return _claim("F2", RG.Intersect((RG.lens_envelope(), RG.HalfPlaneDown(RG.Affine.of(sp.Rational(11, 10))))),
                  K.C312, K.SQRT8, K.SQRT8, "lens below y = 1.1, four disks")


def claim_f3() -> CoverClaim:
    return _claim("F3", RG.lens_large_d(), K.C313, K.SQRT8, K.D_MAX, "far lens for sqrt8 <= d <= 4, two disks")


def claim_f4() -> CoverClaim:
    region = RG.Union((RG.Intersect((RG.lens_envelope(), RG.HStrip(1, -1))), RG.rect_r_prime()))
    return _claim("F4", region, K.C321, K.SQRT8, K.SQRT8, "lens in H(1,-1) plus R', five disks")


def claim_f5() -> CoverClaim:
    region = RG.Union((RG.Intersect((RG.lens_large_d(), RG.HStrip(1, -1))), RG.rect_r(True)))
    return _claim("F5", region, K.C322, K.SQRT8, K.D_MAX, "far lens in H(1,-1) plus R, three disks")


def claim_f2_restricted() -> CoverClaim:
    """The four-disk table of F2 on the strip -1 <= y <= 1.1 that the solver actually uses."""
    c = _claim("F2R", RG.Intersect((RG.lens_envelope(), RG.HStrip(sp.Rational(11, 10), -1))),
               K.C312, K.SQRT8, K.SQRT8, "lens in H(1.1,-1), four disks")
    # the cover margin away from the origin tangency is only about 1.7e-5
    return replace(c, depth=18, delta_min=2.0 ** -16)


def claim_f4_fixed() -> CoverClaim:
    c = claim_f4()
    return CoverClaim("F4E", c.region, K.C321_FIXED.centers, K.C321_FIXED.radius, c.d_lo, c.d_hi,
                      "F4 region, corrected five-disk table")


CORE_CLAIMS = {"F1": claim_f1, "F2": claim_f2, "F3": claim_f3, "F4": claim_f4, "F5": claim_f5}
EXTRA_CLAIMS = {"F2R": claim_f2_restricted, "F4E": claim_f4_fixed}
ALL_CLAIMS = {**CORE_CLAIMS, **EXTRA_CLAIMS}


def get_claim(cid: str) -> CoverClaim:
    try:
        return ALL_CLAIMS[cid.upper()]()
    except KeyError:
        raise KeyError(f"unknown claim {cid!r}; choose from {sorted(ALL_CLAIMS)}") from None


# --- certificate ----------------------------------------------------------------


@dataclass
class Tangency:
    x: float
    y: float
    d_lo: float
    d_hi: float
    exact: str          # exact coordinates, for the record
    cover_index: int

    def to_doc(self):
        return {"point": [self.x, self.y], "d_range": [self.d_lo, self.d_hi],
                "exact": self.exact, "cover_index": self.cover_index}


@dataclass
class Certificate:
    claim: str
    status: str
    cell_count: int = 0
    max_depth: int = 0
    counterexample: dict | None = None
    tangencies: list = field(default_factory=list)
    tangency_cells: list = field(default_factory=list)
    inconclusive_cells: list = field(default_factory=list)
    depth_limit: int = 0
    delta_min: float = 0.0
    rounding_mode: str = ROUNDING_MODE
    tool_version: str = __version__

    def to_doc(self) -> dict:
        return {
            "claim": self.claim,
            "status": self.status,
            "cell_count": self.cell_count,
            "max_depth": self.max_depth,
            "depth_limit": self.depth_limit,
            "delta_min": self.delta_min,
            "counterexample": self.counterexample,
            "tangencies": [t.to_doc() for t in self.tangencies],
            "tangency_cells": self.tangency_cells[:50],
            "tangency_cell_count": len(self.tangency_cells),
            "inconclusive_cells": self.inconclusive_cells[:50],
            "inconclusive_count": len(self.inconclusive_cells),
            "rounding_mode": self.rounding_mode,
            "tool_version": self.tool_version,
        }


# --- compiled numeric form ------------------------------------------------------


@dataclass
class _Compiled:
    disks: list          # per region disk: (cx_coef, cy_coef, r_coef)
    lins: list           # (kind, coef)
    cov: np.ndarray      # (m, 4): cx_lo, cx_hi, cy_lo, cy_hi
    cov_r2_lo: float
    cov_r2_hi: float


def _compile_piece(piece, claim: CoverClaim) -> _Compiled:
    disks, lins = [], []
    for atom in piece:
        if atom[0] == "disk":
            disks.append((_coef(atom[1]), _coef(atom[2]), _coef(atom[3])))
        else:
            lins.append((atom[0], _coef(atom[1])))
    cov = []
    for x, y in claim.centers:
        ix, iy = K.to_interval(x), K.to_interval(y)
        cov.append((ix.lo, ix.hi, iy.lo, iy.hi))
    r2 = K.to_interval(claim.radius).sqr()
    return _Compiled(disks, lins, np.array(cov, dtype=float), r2.lo, r2.hi)


def _tighten(comp: _Compiled, cells: np.ndarray):
    """Shrink boxes to bounds implied by the piece; flag boxes proven outside."""
    XL, XH, YL, YH, DL, DH = (cells[:, i].copy() for i in range(6))
    for kind, coef in comp.lins:
        vl, vh = _affine(coef, DL, DH)
        if kind == "ylo":
            YL = np.maximum(YL, vl)
        elif kind == "yhi":
            YH = np.minimum(YH, vh)
        elif kind == "xlo":
            XL = np.maximum(XL, vl)
        else:
            XH = np.minimum(XH, vh)
    for cxc, cyc, rc in comp.disks:
        cx, cy, r = _affine(cxc, DL, DH), _affine(cyc, DL, DH), _affine(rc, DL, DH)
        XL = np.maximum(XL, _dn(cx[0] - r[1]))
        XH = np.minimum(XH, _up(cx[1] + r[1]))
        YL = np.maximum(YL, _dn(cy[0] - r[1]))
        YH = np.minimum(YH, _up(cy[1] + r[1]))
    outside = (XL > XH) | (YL > YH)
    XH = np.maximum(XH, XL)
    YH = np.maximum(YH, YL)
    for cxc, cyc, rc in comp.disks:
        cx, cy, r = _affine(cxc, DL, DH), _affine(cyc, DL, DH), _affine(rc, DL, DH)
        d2 = _iadd(_isqr(_isub((XL, XH), cx)), _isqr(_isub((YL, YH), cy)))
        outside |= d2[0] > _isqr(r)[1]
    return np.column_stack([XL, XH, YL, YH, DL, DH]), outside


def _corner_g(cells: np.ndarray, cx, cy, r2):
    """g(p) = |p - c|^2 - r^2 at the four corners: list of 4 intervals."""
    out = []
    for xi in (0, 1):
        for yi in (2, 3):
            X = (cells[:, xi], cells[:, xi])
            Y = (cells[:, yi], cells[:, yi])
            v = _iadd(_isqr(_isub(X, cx)), _isqr(_isub(Y, cy)))
            out.append(_isub(v, r2))
    return out


def _covered(comp: _Compiled, cells: np.ndarray) -> np.ndarray:
    """Boxes (already tightened) whose part in the piece is proven covered."""
    n = len(cells)
    ok = np.zeros(n, dtype=bool)
    if n == 0:
        return ok
    X = (cells[:, 0], cells[:, 1])
    Y = (cells[:, 2], cells[:, 3])
    m = len(comp.cov)
    # single disk: sup over the box of |p - c|^2 <= r^2
    for j in range(m):
        c = comp.cov[j]
        d2 = _iadd(_isqr(_isub(X, (c[0], c[1]))), _isqr(_isub(Y, (c[2], c[3]))))
        ok |= d2[1] <= comp.cov_r2_lo
    rest = np.flatnonzero(~ok)
    if len(rest) == 0:
        return ok
    sub = cells[rest]
    r2 = (comp.cov_r2_lo, comp.cov_r2_hi)
    g = [_corner_g(sub, (c[0], c[1]), (c[2], c[3]), r2) for c in comp.cov]
    DL, DH = sub[:, 4], sub[:, 5]
    h = []
    for cxc, cyc, rc in comp.disks:
        cx, cy, r = _affine(cxc, DL, DH), _affine(cyc, DL, DH), _affine(rc, DL, DH)
        h.append(_corner_g(sub, cx, cy, _isqr(r)))
    # Combinations  lam*g_i + (1-lam)*g_j - mu*h_k <= 0  on the box imply the
    # covered claim inside region disk k; convex in p for mu <= 1, so corners suffice.
    combos = []
    for i, j in combinations(range(m), 2):
        for lam in LAMBDAS:
            combos.append(((i, lam), (j, 1.0 - lam)))
    singles = [((i, 1.0),) for i in range(m)]
    good = np.zeros(len(rest), dtype=bool)

    def upper(terms, k, mu):
        worst = np.full(len(rest), -np.inf)
        for corner in range(4):
            acc = (np.zeros(len(rest)), np.zeros(len(rest)))
            for idx, w in terms:
                acc = _iadd(acc, _iscale(w, g[idx][corner]))
            if k is not None:
                acc = _isub(acc, _iscale(mu, h[k][corner]))
            worst = np.maximum(worst, acc[1])
        return worst

    for terms in combos:
        good |= upper(terms, None, 0.0) <= 0.0
    for k in range(len(h)):
        for mu in MUS:
            for terms in singles + combos:
                todo = ~good
                if not todo.any():
                    break
                good |= upper(terms, k, mu) <= 0.0
    ok[rest] = good
    return ok


def _classify_chunk(args):
    comp, cells = args
    tight, outside = _tighten(comp, cells)
    covered = np.zeros(len(cells), dtype=bool)
    idx = np.flatnonzero(~outside)
    covered[idx] = _covered(comp, tight[idx])
    return tight, outside, covered


def _classify(comp, cells, pool, chunk: int = 4096):
    if pool is None or len(cells) <= chunk:
        return _classify_chunk((comp, cells))
    parts = [(comp, cells[i:i + chunk]) for i in range(0, len(cells), chunk)]
    res = list(pool.map(_classify_chunk, parts))
    return (np.vstack([r[0] for r in res]), np.concatenate([r[1] for r in res]),
            np.concatenate([r[2] for r in res]))


# --- refutation -----------------------------------------------------------------


def _rigorous_counterexample(claim, pieces, x: float, y: float, d_iv: Interval) -> bool:
    if not any(RG.piece_contains_rigorous(p, x, y, d_iv) for p in pieces):
        return False
    r2 = K.to_interval(claim.radius).sqr()
    X, Y = Interval(x), Interval(y)
    for cx, cy in claim.centers:
        d2 = (X - K.to_interval(cx)).sqr() + (Y - K.to_interval(cy)).sqr()
        if not d2.lo > r2.hi:
            return False
    return True


def _float_margin(claim_disks, x, y):
    """max over cover disks of (radius - distance); negative means uncovered."""
    out = np.full(np.shape(x), -np.inf)
    for dk in claim_disks:
        out = np.maximum(out, dk.radius - np.hypot(x - dk.center.x, y - dk.center.y))
    return out


def _d_interval(dl: float, dh: float, fixed: bool, claim) -> Interval:
    if fixed:
        return K.to_interval(claim.d_lo)
    dm = 0.5 * (dl + dh)
    return Interval(dm)


def _try_refute(claim, pieces, piece, cells: np.ndarray, disks, fixed, with_corners=False):
    """Sample the cells; return (x, y, d) of a proven counterexample or None."""
    pts = [(0.5 * (cells[:, 0] + cells[:, 1]), 0.5 * (cells[:, 2] + cells[:, 3]))]
    if with_corners:
        for xi in (0, 1):
            for yi in (2, 3):
                pts.append((cells[:, xi], cells[:, yi]))
    dmid = 0.5 * (cells[:, 4] + cells[:, 5])
    for x, y in pts:
        marg = _float_margin(disks, x, y)
        cand = np.flatnonzero(marg < -1e-12)
        for i in cand:
            d_val = float(dmid[i])
            if not RG.piece_contains(piece, x[i], y[i], d_val):
                continue
            d_iv = _d_interval(cells[i, 4], cells[i, 5], fixed, claim)
            if _rigorous_counterexample(claim, pieces, float(x[i]), float(y[i]), d_iv):
                return float(x[i]), float(y[i]), (K.to_float(claim.d_lo) if fixed else d_val)
    return None


# --- tangency registration --------------------------------------------------------


def _primitives(piece, d):
    """Exact circles and axis lines of a piece at parameter value d.

    Each entry carries a flag telling whether it moves with d.
    """
    circles, lines = [], []
    for atom in piece:
        if atom[0] == "disk":
            _, cx, cy, r = atom
            circles.append(((cx.exact(d), cy.exact(d), r.exact(d)), cx.b != 0 or cy.b != 0 or r.b != 0))
        elif atom[0] in ("ylo", "yhi"):
            lines.append((("h", atom[1].exact(d)), atom[1].b != 0))
        else:
            lines.append((("v", atom[1].exact(d)), atom[1].b != 0))
    return circles, lines


def _f(e) -> float:
    return K.to_float(e)


def _cc_float(c1, c2):
    a = Disk(Point(_f(c1[0]), _f(c1[1])), _f(c1[2]))
    b = Disk(Point(_f(c2[0]), _f(c2[1])), _f(c2[2]))
    try:
        return circle_circle_intersections(a, b)
    except ValueError:
        return []


def _cl_float(c, line):
    x0, y0, r = _f(c[0]), _f(c[1]), _f(c[2])
    kind, v = line[0], _f(line[1])
    off = v - (y0 if kind == "h" else x0)
    s2 = r * r - off * off
    if s2 < -1e-12:
        return []
    s = math.sqrt(max(s2, 0.0))
    return [(x0 - s, v), (x0 + s, v)] if kind == "h" else [(v, y0 - s), (v, y0 + s)]


def _cc_exact(c1, c2):
    (x1, y1, r1), (x2, y2, r2) = c1, c2
    dx, dy = x2 - x1, y2 - y1
    D2 = sp.simplify(dx ** 2 + dy ** 2)
    Dd = sp.sqrt(D2)
    a = sp.simplify((r1 ** 2 - r2 ** 2 + D2) / (2 * Dd))
    h2 = sp.simplify(r1 ** 2 - a ** 2)
    h = sp.Integer(0) if RG.is_exact_zero(h2) else sp.sqrtdenest(sp.sqrt(h2))
    bx, by = x1 + a * dx / Dd, y1 + a * dy / Dd
    return [(bx - h * dy / Dd, by + h * dx / Dd), (bx + h * dy / Dd, by - h * dx / Dd)]


def _cl_exact(c, line):
    x0, y0, r = c
    kind, v = line
    s = sp.sqrtdenest(sp.sqrt(r ** 2 - (v - (y0 if kind == "h" else x0)) ** 2))
    return [(x0 - s, v), (x0 + s, v)] if kind == "h" else [(v, y0 - s), (v, y0 + s)]


def _ll_exact(l1, l2):
    h, v = (l1, l2) if l1[0] == "h" else (l2, l1)
    return [(v[1], h[1])]


def _locally_covered(piece, disks, x: float, y: float, d: float) -> bool:
    """Float probe that the cover margin has a local minimum of ~0 at (x, y):
    region points on small rings around it are never uncovered."""
    ang = np.linspace(0.0, 2 * np.pi, 721)
    for rad in (1e-7, 1e-6, 1e-5, 1e-4):
        px, py = x + rad * np.cos(ang), y + rad * np.sin(ang)
        # include the exact axis directions, which matter for degenerate pieces
        px = np.concatenate([px, [x + rad, x - rad, x, x]])
        py = np.concatenate([py, [y, y, y + rad, y - rad]])
        inside = RG.piece_contains(piece, px, py, d)
        if inside.any() and _float_margin(disks, px[inside], py[inside]).min() < -1e-12:
            return False
    return True


def register_tangencies(claim: CoverClaim, pieces=None) -> list[Tangency]:
    """Exact points of the region where the cover margin has a zero minimum.

    Candidates are pairwise intersections of region circles, region lines and
    cover circles at the ends of the d range.  A float pass keeps candidates in
    the region whose cover margin is within 1e-9 of zero and which are local
    minima of the margin (so points where the cover boundary merely crosses
    the region boundary are rejected).  Survivors are rebuilt in closed form and
    accepted only if sympy confirms they lie on a cover circle and in the
    closed region.  A point built only from d-independent primitives that lies
    in the region at both ends of the d range is registered for the whole
    range: each constraint is convex in d, so membership holds in between.
    """
    pieces = pieces if pieces is not None else RG.to_dnf(claim.region)
    cov = [((x, y, claim.radius), False) for x, y in claim.centers]
    disks = claim.disks
    d_ends = [claim.d_lo] if claim.fixed_d else [claim.d_lo, claim.d_hi]
    found: dict[tuple, Tangency] = {}
    for d in d_ends:
        d_f = _f(d)
        for piece in pieces:
            circles, lines = _primitives(piece, d)
            circles = circles + cov
            # simplest generators first, so a point reachable several ways gets
            # its shortest closed form
            gens = []   # (float points, exact builder, moves-with-d)
            for (l1, w1), (l2, w2) in combinations(lines, 2):
                if l1[0] != l2[0]:
                    h, v = (l1, l2) if l1[0] == "h" else (l2, l1)
                    gens.append(([(_f(v[1]), _f(h[1]))], lambda l1=l1, l2=l2: _ll_exact(l1, l2), w1 or w2))
            for a, va in circles:
                for ln, vl in lines:
                    gens.append((_cl_float(a, ln), lambda a=a, ln=ln: _cl_exact(a, ln), va or vl))
            for (a, va), (b, vb) in combinations(circles, 2):
                gens.append((_cc_float(a, b), lambda a=a, b=b: _cc_exact(a, b), va or vb))
            seen = set()
            for fpts, build, dep in gens:
                for fx, fy in fpts:
                    spot = (round(fx, 8), round(fy, 8))
                    if spot in seen:
                        continue
                    seen.add(spot)
                    if not RG.piece_contains(piece, fx, fy, d_f, tol=TANGENCY_FLOAT_TOL):
                        continue
                    if abs(float(_float_margin(disks, np.array(fx), np.array(fy)))) > TANGENCY_FLOAT_TOL:
                        continue
                    if not _locally_covered(piece, disks, fx, fy, d_f):
                        continue
                    exact = min(build(), key=lambda q: (_f(q[0]) - fx) ** 2 + (_f(q[1]) - fy) ** 2)
                    px, py = exact
                    on = [i for i, ((cx, cy, r), _) in enumerate(cov)
                          if RG.is_exact_zero((px - cx) ** 2 + (py - cy) ** 2 - r ** 2)]
                    if not on or not RG.piece_contains_exact(piece, px, py, d):
                        continue
                    lo = hi = d_f
                    if not dep and not claim.fixed_d:
                        other = claim.d_hi if d == claim.d_lo else claim.d_lo
                        if _in_region_exact(pieces, px, py, other) and _convex_in_d(pieces):
                            lo, hi = claim.d_range
                    key = (round(fx, 9), round(fy, 9), round(lo, 9), round(hi, 9))
                    if key not in found:
                        text = f"({sp.sstr(sp.radsimp(sp.simplify(px)))}, {sp.sstr(sp.radsimp(sp.simplify(py)))})"
                        found[key] = Tangency(_f(px), _f(py), lo, hi, text, on[0])
    out = sorted(found.values(), key=lambda t: (t.x, t.y, t.d_lo, t.d_hi))
    full = {(round(t.x, 9), round(t.y, 9)) for t in out if t.d_hi > t.d_lo}
    # a whole-range entry makes endpoint entries for the same point redundant
    return [t for t in out if t.d_hi > t.d_lo or (round(t.x, 9), round(t.y, 9)) not in full]


def _in_region_exact(pieces, px, py, d) -> bool:
    return any(RG.piece_contains_exact(piece, px, py, d) for piece in pieces)


def _convex_in_d(pieces) -> bool:
    """Every disk constraint g(p, d) has a nonnegative d^2 coefficient."""
    for piece in pieces:
        for atom in piece:
            if atom[0] == "disk":
                _, cx, cy, r = atom
                if sp.N(cx.b ** 2 + cy.b ** 2 - r.b ** 2) < 0:
                    return False
    return True


def _near_tangency(cells: np.ndarray, tangencies, radius: float, fixed: bool):
    """Index of the first registered tangency within ``radius`` of each cell, else -1."""
    out = np.full(len(cells), -1)
    for t_i, t in enumerate(tangencies):
        dx = np.maximum(0.0, np.maximum(cells[:, 0] - t.x, t.x - cells[:, 1]))
        dy = np.maximum(0.0, np.maximum(cells[:, 2] - t.y, t.y - cells[:, 3]))
        near = (dx <= radius) & (dy <= radius)
        if not fixed:
            dd = np.maximum(0.0, np.maximum(cells[:, 4] - t.d_hi, t.d_lo - cells[:, 5]))
            near &= dd <= radius
        out = np.where((out < 0) & near, t_i, out)
    return out


# --- driver ------------------------------------------------------------------------


def certify_cover(claim: CoverClaim, max_depth: int | None = None, delta_min: float | None = None,
                  workers: int = 1) -> Certificate:
    """Branch-and-bound proof that the claim's disks cover its region.

    ``max_depth`` and ``delta_min`` default to the claim's own budget.
    """
    max_depth = claim.depth if max_depth is None else max_depth
    delta_min = claim.delta_min if delta_min is None else delta_min
    pieces = RG.to_dnf(claim.region)
    disks = claim.disks
    fixed = claim.fixed_d
    d_iv = K.to_interval(claim.d_lo) if fixed else Interval(K.to_interval(claim.d_lo).lo,
                                                             K.to_interval(claim.d_hi).hi)
    tangencies = register_tangencies(claim, pieces)
    cert = Certificate(claim.id, CONFIRMED, tangencies=tangencies, depth_limit=max_depth,
                       delta_min=delta_min)
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for p_i, piece in enumerate(pieces):
            status = _run_piece(claim, pieces, piece, p_i, disks, fixed, d_iv, tangencies,
                                max_depth, delta_min, cert, pool)
            if status == REFUTED:
                cert.status = REFUTED
                return cert
    finally:
        if pool is not None:
            pool.shutdown()
    if cert.inconclusive_cells:
        cert.status = INCONCLUSIVE
    return cert


def _run_piece(claim, pieces, piece, p_i, disks, fixed, d_iv, tangencies, max_depth, delta_min, cert, pool):
    comp = _compile_piece(piece, claim)
    if _subsumed(piece, claim):
        cert.cell_count += 1
        return CONFIRMED
    x0, x1, y0, y1 = RG.piece_bbox(piece, d_iv.lo, d_iv.hi)
    if not (x0 <= x1 and y0 <= y1):
        return CONFIRMED
    cells = np.array([[x0, x1, y0, y1, d_iv.lo, d_iv.hi]], dtype=float)
    depth = 0
    while len(cells):
        cert.cell_count += len(cells)
        cert.max_depth = max(cert.max_depth, depth)
        tight, outside, covered = _classify(comp, cells, pool)
        und = tight[~outside & ~covered]
        if not len(und):
            break
        hit = _try_refute(claim, pieces, piece, und, disks, fixed)
        if hit is not None:
            cert.counterexample = {"point": [hit[0], hit[1]], "d": hit[2], "piece": p_i}
            return REFUTED
        diam = np.hypot(und[:, 1] - und[:, 0], und[:, 3] - und[:, 2])
        esc = (depth >= max_depth) | (diam < delta_min)
        if esc.any():
            e = und[esc]
            hit = _try_refute(claim, pieces, piece, e, disks, fixed, with_corners=True)
            if hit is not None:
                cert.counterexample = {"point": [hit[0], hit[1]], "d": hit[2], "piece": p_i}
                return REFUTED
            near = _near_tangency(e, tangencies, TANGENCY_RADIUS * delta_min, fixed)
            for cell, t_i in zip(e, near):
                rec = [float(v) for v in cell] + [int(p_i)]
                if t_i >= 0:
                    cert.tangency_cells.append(rec + [int(t_i)])
                else:
                    cert.inconclusive_cells.append(rec)
        cells = _split(und[~esc], fixed)
        depth += 1
    return CONFIRMED


def _subsumed(piece, claim: CoverClaim) -> bool:
    """Some disk atom of the piece lies inside one cover disk for every d.

    |c_atom(d) - c| + r_atom(d) - rho is convex in d, so an exact sign check at
    both ends of the d range settles it.
    """
    ends = {sp.nsimplify(claim.d_lo), sp.nsimplify(claim.d_hi)}
    for atom in piece:
        if atom[0] != "disk":
            continue
        _, cx, cy, r = atom
        for x, y in claim.centers:
            if all(RG._exact_sign(sp.sqrt((cx.exact(d) - x) ** 2 + (cy.exact(d) - y) ** 2)
                                  + r.exact(d) - claim.radius) <= 0 for d in ends):
                return True
    return False


def _split(cells: np.ndarray, fixed: bool) -> np.ndarray:
    """Quadtree children in (x, y); the d interval is halved too when it is the
    widest side.  Children of one parent stay adjacent, in a fixed order."""
    if not len(cells):
        return cells.reshape(0, 6)
    XL, XH, YL, YH, DL, DH = cells.T
    XM, YM, DM = 0.5 * (XL + XH), 0.5 * (YL + YH), 0.5 * (DL + DH)
    split_d = np.zeros(len(cells), dtype=bool) if fixed else (DH - DL) > np.maximum(XH - XL, YH - YL)
    d_halves = [(DL, np.where(split_d, DM, DH)), (DM, DH)]
    kids, keep = [], []
    for h, (dl, dh) in enumerate(d_halves):
        for xl, xh, yl, yh in ((XL, XM, YL, YM), (XM, XH, YL, YM), (XL, XM, YM, YH), (XM, XH, YM, YH)):
            kids.append(np.column_stack([xl, xh, yl, yh, dl, dh]))
            keep.append(np.ones(len(cells), dtype=bool) if h == 0 else split_d)
    allc = np.stack(kids, axis=1).reshape(-1, 6)
    mask = np.stack(keep, axis=1).reshape(-1)
    return allc[mask]


def certify_all_paper_claims(max_depth: int | None = None, delta_min: float | None = None,
                             workers: int = 1):
    return [certify_cover(CORE_CLAIMS[c](), max_depth, delta_min, workers) for c in sorted(CORE_CLAIMS)]


# --- reduction of the variable-d claims to d = sqrt8 ---------------------------------


@dataclass
class NestingReport:
    ok: bool
    samples: int
    witness: dict | None = None


def _in_lens_small(x, y, d):
    """Membership in L(d) for 0 < d <= sqrt8, the isolated point c_A included."""
    s8 = K.SQRT8_F
    in_lens = ((x - (s8 - d)) ** 2 + y ** 2 <= d * d) & ((x - s8) ** 2 + y ** 2 <= 4.0)
    return in_lens | ((x == s8 - d) & (y == 0.0))


def _in_envelope(x, y, tol):
    """Membership in the region certified for F1/F2/F4 (lens at sqrt8 plus the c_A track)."""
    s8 = K.SQRT8_F
    lens = (x * x + y * y <= 8.0 + tol) & ((x - s8) ** 2 + y ** 2 <= 4.0 + tol)
    track = (np.abs(y) <= tol) & (x >= -tol) & (x <= K.R_BIG_F + tol)
    return lens | track


def _in_lens_at_s8(x, y, tol):
    s8 = K.SQRT8_F
    lens = (x * x + y * y <= 8.0 + tol) & ((x - s8) ** 2 + y ** 2 <= 4.0 + tol)
    return lens | ((np.abs(x) <= tol) & (np.abs(y) <= tol))


def _in_r_prime(x, y, d, tol=0.0):
    s8 = K.SQRT8_F
    r1 = (x >= s8 - d - tol) & (x <= K.R_BIG_F + tol) & (y >= 1 - K.STRIP_TOP_F - tol) & (y <= tol)
    r2 = (x >= K.R_BIG_F - tol) & (x <= s8 + tol) & (y >= -1 - tol) & (y <= tol)
    return r1 | r2


def verify_nesting(samples: int = 1_000_000, seed: int = 0, literal: bool = False,
                   tol: float = 1e-12) -> NestingReport:
    """Randomized check that every L(d), 0 < d <= sqrt8, lies in the region
    certified at d = sqrt8, and that R'(d) lies in R'(sqrt8).

    Half of the samples are uniform in the bounding box of B(c_B, 2), the
    other half sit on c_A itself, which is where the lens and its envelope
    differ.  With ``literal=True`` the target is L(sqrt8) alone; that check
    fails at c_A for 2 < d < sqrt8 and returns the witness.
    """
    rng = np.random.default_rng(seed)
    s8 = K.SQRT8_F
    n_box = samples - samples // 2
    d = np.concatenate([rng.uniform(0.0, s8, n_box), rng.uniform(0.0, s8, samples // 2)])
    d[d == 0.0] = s8                       # d is drawn from (0, sqrt8]
    x = np.concatenate([rng.uniform(s8 - 2, s8 + 2, n_box), s8 - d[n_box:]])
    y = np.concatenate([rng.uniform(-2, 2, n_box), np.zeros(samples // 2)])

    src = _in_lens_small(x, y, d)
    dst = _in_lens_at_s8(x, y, tol) if literal else _in_envelope(x, y, tol)
    bad = np.flatnonzero(src & ~dst)
    if len(bad):
        i = int(bad[0])
        return NestingReport(False, samples, {"set": "L", "d": float(d[i]), "point": [float(x[i]), float(y[i])]})

    xr = rng.uniform(-0.5, s8 + 0.5, samples)
    yr = rng.uniform(-2.0, 0.5, samples)
    src = _in_r_prime(xr, yr, d)
    dst = _in_r_prime(xr, yr, s8, tol)
    bad = np.flatnonzero(src & ~dst)
    if len(bad):
        i = int(bad[0])
        return NestingReport(False, samples, {"set": "R'", "d": float(d[i]), "point": [float(xr[i]), float(yr[i])]})
    return NestingReport(True, samples)


# --- strip height envelope ---------------------------------------------------------


def _lens_top(d: np.ndarray, x: np.ndarray, far: bool) -> np.ndarray:
    """Largest y with (x, y) in the normalized lens; NaN where the column is empty."""
    s8 = K.SQRT8_F
    ra2 = 4.0 if far else d * d
    h2 = np.minimum(ra2 - (x - (s8 - d)) ** 2, 4.0 - (s8 - x) ** 2)
    return np.where(h2 >= 0, np.sqrt(np.maximum(h2, 0.0)), np.nan)


def _column_max(far: bool, d: np.ndarray, x_lo: float, x_hi: float, iters: int = 100) -> np.ndarray:
    """max over x of the lens top for each d; the top is concave in x, so a
    ternary search on every column converges to the column maximum."""
    lo = np.full_like(d, x_lo)
    hi = np.full_like(d, x_hi)
    # start from the best node of a coarse scan so the search stays inside the lens
    xs = np.linspace(x_lo, x_hi, 401)
    top = _lens_top(d[:, None], xs[None, :], far)
    empty = np.all(np.isnan(top), axis=1)
    k = np.where(empty, 0, np.nanargmax(np.where(np.isnan(top), -1.0, top), axis=1))
    step = xs[1] - xs[0]
    lo, hi = np.maximum(lo, xs[k] - step), np.minimum(hi, xs[k] + step)
    for _ in range(iters):
        m1, m2 = lo + (hi - lo) / 3, hi - (hi - lo) / 3
        f1 = np.nan_to_num(_lens_top(d, m1, far), nan=-1.0)
        f2 = np.nan_to_num(_lens_top(d, m2, far), nan=-1.0)
        left = f1 < f2
        lo, hi = np.where(left, m1, lo), np.where(left, hi, m2)
    best = np.nan_to_num(_lens_top(d, 0.5 * (lo + hi), far), nan=-1.0)
    return np.where(empty, -np.inf, np.maximum(best, np.nanmax(np.where(np.isnan(top), -1.0, top), axis=1)))


def _grid_max(far: bool, d_lo: float, d_hi: float, x_lo: float, x_hi: float,
              n: int = 201, rounds: int = 30) -> tuple[float, float]:
    """Dense grid over d, exact column maxima over x, then zoom around the best d."""
    best = (-np.inf, d_lo)
    dl, dh = d_lo, d_hi
    for _ in range(rounds):
        ds = np.linspace(dl, dh, n)
        g = _column_max(far, ds, x_lo, x_hi)
        k = int(np.argmax(g))
        if g[k] > best[0]:
            best = (float(g[k]), float(ds[k]))
        if dh == dl:
            break
        w = 4 * (dh - dl) / n
        dl, dh = max(d_lo, ds[k] - w), min(d_hi, ds[k] + w)
    return best


def strip_height(domain: str = "all", d: float | None = None) -> float:
    """Maximum |y| of a normalized witness center.

    ``domain`` is "lens" (0 <= d <= sqrt8), "far" (sqrt8 <= d <= 4) or "all";
    passing ``d`` pins the anchor distance.
    """
    s8 = K.SQRT8_F
    out = -np.inf
    for far, lo, hi in ((False, 0.0, s8), (True, s8, 4.0)):
        if domain != "all" and domain != ("far" if far else "lens"):
            continue
        if d is not None:
            if not lo <= d <= hi:
                continue
            lo = hi = d
        out = max(out, _grid_max(far, lo, hi, s8 - 2.0, s8 + 2.0)[0])
    return float(out)


def max_strip_height() -> float:
    return strip_height("all")
