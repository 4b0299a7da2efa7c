"""Closed planar regions built from disks, horizontal strips and rectangles.

Every numeric parameter is affine in a sweep parameter d, stored exactly as a
sympy pair (a, b) meaning a + b*d.  Regions are flattened to a union of
convex pieces (each a conjunction of atomic constraints) before certification.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import sympy as sp
from sympy.polys.polyerrors import NotAlgebraic

from . import constants as K
from .geometry import Interval

D = sp.Symbol("d", real=True)


@dataclass(frozen=True)
class Affine:
    a: sp.Expr
    b: sp.Expr = sp.Integer(0)

    @classmethod
    def of(cls, v) -> "Affine":
        if isinstance(v, Affine):
            return v
        e = sp.sympify(v)
        return cls(sp.simplify(e.subs(D, 0)), sp.simplify(sp.diff(e, D)))

    @property
    def expr(self) -> sp.Expr:
        return self.a + self.b * D

    @cached_property
    def fa(self) -> float:
        return K.to_float(self.a)

    @cached_property
    def fb(self) -> float:
        return K.to_float(self.b)

    @cached_property
    def ia(self) -> Interval:
        return K.to_interval(self.a)

    @cached_property
    def ib(self) -> Interval:
        return K.to_interval(self.b)

    def at(self, d: float) -> float:
        return self.fa + self.fb * d

    def exact(self, d) -> sp.Expr:
        return self.a + self.b * d

    def __hash__(self):
        return hash((str(self.a), str(self.b)))


# --- AST ------------------------------------------------------------------------


class Region:
    def __and__(self, other):
        return Intersect((self, other))

    def __or__(self, other):
        return Union((self, other))


@dataclass(frozen=True, eq=False)
class RDisk(Region):
    cx: Affine
    cy: Affine
    radius: Affine


@dataclass(frozen=True, eq=False)
class HalfPlaneUp(Region):
    """y >= a"""
    a: Affine


@dataclass(frozen=True, eq=False)
class HalfPlaneDown(Region):
    """y <= a"""
    a: Affine


@dataclass(frozen=True, eq=False)
class XRange(Region):
    lo: Affine
    hi: Affine


def HStrip(a, b) -> Region:
    """{b <= y <= a}"""
    return Intersect((HalfPlaneDown(Affine.of(a)), HalfPlaneUp(Affine.of(b))))


def Rect(x_lo, x_hi, y_lo, y_hi) -> Region:
    return Intersect((XRange(Affine.of(x_lo), Affine.of(x_hi)), HStrip(y_hi, y_lo)))


def disk(cx, cy, radius) -> RDisk:
    return RDisk(Affine.of(cx), Affine.of(cy), Affine.of(radius))


@dataclass(frozen=True, eq=False)
class Intersect(Region):
    parts: tuple


@dataclass(frozen=True, eq=False)
class Union(Region):
    parts: tuple


# --- flattening -----------------------------------------------------------------

# Atom kinds: ("disk", cx, cy, r), ("ylo", a), ("yhi", a), ("xlo", a), ("xhi", a)


def to_dnf(region: Region) -> list[tuple]:
    if isinstance(region, RDisk):
        return [(("disk", region.cx, region.cy, region.radius),)]
    if isinstance(region, HalfPlaneUp):
        return [(("ylo", region.a),)]
    if isinstance(region, HalfPlaneDown):
        return [(("yhi", region.a),)]
    if isinstance(region, XRange):
        return [(("xlo", region.lo), ("xhi", region.hi))]
    if isinstance(region, Union):
        out = []
        for p in region.parts:
            out.extend(to_dnf(p))
        return out
    if isinstance(region, Intersect):
        acc = [()]
        for p in region.parts:
            acc = [a + b for a in acc for b in to_dnf(p)]
        return acc
    raise TypeError(type(region).__name__)


def piece_contains(piece, x, y, d: float, tol: float = 0.0) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = np.ones(np.broadcast(x, y).shape, dtype=bool)
    for atom in piece:
        kind = atom[0]
        if kind == "disk":
            _, cx, cy, r = atom
            ok &= np.hypot(x - cx.at(d), y - cy.at(d)) <= r.at(d) + tol
        elif kind == "ylo":
            ok &= y >= atom[1].at(d) - tol
        elif kind == "yhi":
            ok &= y <= atom[1].at(d) + tol
        elif kind == "xlo":
            ok &= x >= atom[1].at(d) - tol
        elif kind == "xhi":
            ok &= x <= atom[1].at(d) + tol
    return ok


def region_contains(pieces, x, y, d: float, tol: float = 0.0) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast(x, y).shape, dtype=bool)
    for piece in pieces:
        out |= piece_contains(piece, x, y, d, tol)
    return out


def piece_contains_rigorous(piece, x: float, y: float, d: Interval) -> bool:
    """True only if (x, y) provably satisfies every atom for every d in ``d``."""
    X, Y = Interval(x), Interval(y)
    for atom in piece:
        kind = atom[0]
        if kind == "disk":
            _, cx, cy, r = atom
            d2 = (X - (cx.ia + cx.ib * d)).sqr() + (Y - (cy.ia + cy.ib * d)).sqr()
            if not d2.hi <= (r.ia + r.ib * d).sqr().lo:
                return False
            continue
        v = atom[1].ia + atom[1].ib * d
        if kind == "ylo" and not Y.lo >= v.hi:
            return False
        if kind == "yhi" and not Y.hi <= v.lo:
            return False
        if kind == "xlo" and not X.lo >= v.hi:
            return False
        if kind == "xhi" and not X.hi <= v.lo:
            return False
    return True


def piece_contains_exact(piece, x, y, d) -> bool:
    """Closed-form membership of an exact sympy point."""
    for atom in piece:
        kind = atom[0]
        if kind == "disk":
            _, cx, cy, r = atom
            val = (x - cx.a - cx.b * d) ** 2 + (y - cy.a - cy.b * d) ** 2 - (r.a + r.b * d) ** 2
            if _exact_sign(val) > 0:
                return False
            continue
        v = atom[1].a + atom[1].b * d
        val = {"ylo": v - y, "yhi": y - v, "xlo": v - x, "xhi": x - v}[kind]
        if _exact_sign(val) > 0:
            return False
    return True


def _exact_sign(e) -> int:
    if is_exact_zero(e):
        return 0
    return 1 if sp.N(e, 60) > 0 else -1


def is_exact_zero(e) -> bool:
    """Symbolic zero test.

    A 60-digit evaluation that is clearly nonzero settles the question; otherwise
    zero must be proven by simplification or by the minimal polynomial being t.
    """
    e = sp.sympify(e)
    if abs(sp.N(e, 60)) > sp.Float("1e-45"):
        return False
    s = sp.simplify(sp.sqrtdenest(sp.expand(e)))
    if s == 0:
        return True
    t = sp.Symbol("t")
    try:
        return sp.minimal_polynomial(s, t) == t
    except (NotAlgebraic, NotImplementedError, ValueError, TypeError):
        return False


def piece_bbox(piece, d_lo: float, d_hi: float):
    """Loose float bounding box of one piece over the d range."""
    x0, x1, y0, y1 = -np.inf, np.inf, -np.inf, np.inf
    for atom in piece:
        kind = atom[0]
        vals = lambda f: (f.at(d_lo), f.at(d_hi))  # noqa: E731  affine -> extremes at ends
        if kind == "disk":
            _, cx, cy, r = atom
            rr = max(vals(r))
            x0 = max(x0, min(vals(cx)) - rr)
            x1 = min(x1, max(vals(cx)) + rr)
            y0 = max(y0, min(vals(cy)) - rr)
            y1 = min(y1, max(vals(cy)) + rr)
        elif kind == "ylo":
            y0 = max(y0, min(vals(atom[1])))
        elif kind == "yhi":
            y1 = min(y1, max(vals(atom[1])))
        elif kind == "xlo":
            x0 = max(x0, min(vals(atom[1])))
        elif kind == "xhi":
            x1 = min(x1, max(vals(atom[1])))
    return x0, x1, y0, y1


# --- the normalized lens regions -------------------------------------------------

S8 = K.SQRT8
C_A_X = S8 - D          # c_A = (sqrt8 - d, 0)


def lens_small_d() -> Region:
    """L(d) for d <= sqrt8 without its isolated point: B(c_A, d) and B(c_B, 2)."""
    return Intersect((disk(C_A_X, 0, D), disk(S8, 0, 2)))


def lens_large_d() -> Region:
    """L(d) for d > sqrt8: B(c_A, 2) and B(c_B, 2)."""
    return Intersect((disk(C_A_X, 0, 2), disk(S8, 0, 2)))


def lens_at_s8_point() -> Region:
    """L(sqrt8) including the isolated point c_A = (0, 0)."""
    return Union((lens_small_d(), Rect(C_A_X, C_A_X, 0, 0)))


def lens_envelope() -> Region:
    """Union of L(d) over 0 < d <= sqrt8, evaluated at d = sqrt8.

    The lens part shrinks into L(sqrt8) as d decreases, but c_A = (sqrt8 - d, 0)
    slides along the segment [0, sqrt8 - 2] x {0}, which is added explicitly.
    """
    return Union((lens_small_d(), Rect(0, S8 - 2, 0, 0)))


def rect_r(large_d: bool) -> Region:
    if large_d:
        return Rect(S8 - 2, S8 - D + 2, -1, 0)
    return Rect(S8 - 2, S8, -1, 0)


def rect_r_prime() -> Region:
    r1 = Rect(C_A_X, S8 - 2, 1 - K.STRIP_TOP, 0)
    return Union((r1, rect_r(False)))
