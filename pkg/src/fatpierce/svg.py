"""SVG 1.1 figures for cover claims and families.

Regions are drawn piece by piece: each convex piece is a box clipped by its
half-planes, with disks replaced by inscribed 256-gons.  Plane y points up, so
every coordinate is written as (x, -y).
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from . import regions as RG
from .fatsets import Family
from .geometry import Disk, _clip_halfplane, signed_area

DISK_SEGMENTS = 256
PAD = 0.10


def _disk_edges(cx: float, cy: float, r: float):
    t = 2 * math.pi * np.arange(DISK_SEGMENTS + 1) / DISK_SEGMENTS
    pts = [(cx + r * math.cos(a), cy + r * math.sin(a)) for a in t]
    return list(zip(pts[:-1], pts[1:]))


def piece_polygon(piece, d: float) -> list[tuple[float, float]]:
    """Vertices of one convex piece at anchor distance d (may be degenerate)."""
    x0, x1, y0, y1 = RG.piece_bbox(piece, d, d)
    if not (x0 <= x1 and y0 <= y1):
        return []
    poly = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    for atom in piece:
        kind = atom[0]
        if kind == "disk":
            _, cx, cy, r = atom
            edges = _disk_edges(cx.at(d), cy.at(d), r.at(d))
        else:
            v = atom[1].at(d)
            edges = [{"ylo": ((0.0, v), (1.0, v)), "yhi": ((1.0, v), (0.0, v)),
                      "xlo": ((v, 1.0), (v, 0.0)), "xhi": ((v, 0.0), (v, 1.0))}[kind]]
        for a, b in edges:
            poly = _clip_halfplane(poly, a, b)
            if not poly:
                return []
    return [(float(x), float(y)) for x, y in poly]


class _Canvas:
    def __init__(self, box, title: str):
        x0, x1, y0, y1 = box
        w, h = x1 - x0, y1 - y0
        px, py = PAD * max(w, 1e-3), PAD * max(h, 1e-3)
        self.vb = (x0 - px, -(y1 + py), w + 2 * px, h + 2 * py)
        self.unit = max(self.vb[2], self.vb[3]) / 400.0
        self.items: list[str] = []
        self.title = title

    def _pts(self, pts) -> str:
        return " ".join(f"{x:.6f},{-y:.6f}" for x, y in pts)

    def polygon(self, pts, fill: str, stroke: str, dashed=False, opacity=0.35):
        dash = f' stroke-dasharray="{4 * self.unit:.6f}"' if dashed else ""
        if len(pts) >= 3 and abs(signed_area(pts)) > 1e-12:
            self.items.append(f'<polygon points="{self._pts(pts)}" fill="{fill}" fill-opacity="{opacity}" '
                              f'stroke="{stroke}" stroke-width="{self.unit:.6f}"{dash}/>')
        elif len(pts) >= 2:
            self.items.append(f'<polyline points="{self._pts(pts)}" fill="none" stroke="{stroke}" '
                              f'stroke-width="{2 * self.unit:.6f}"{dash}/>')
        elif pts:
            self.dot(pts[0], stroke)

    def circle(self, cx, cy, r, stroke: str, fill="none"):
        self.items.append(f'<circle cx="{cx:.6f}" cy="{-cy:.6f}" r="{r:.6f}" fill="{fill}" '
                          f'stroke="{stroke}" stroke-width="{self.unit:.6f}"/>')

    def dot(self, p, color: str, size: float = 2.5):
        self.items.append(f'<circle cx="{p[0]:.6f}" cy="{-p[1]:.6f}" r="{size * self.unit:.6f}" fill="{color}"/>')

    def cross(self, p, color: str):
        s = 6 * self.unit
        x, y = p[0], -p[1]
        self.items.append(f'<path d="M{x - s:.6f},{y - s:.6f}L{x + s:.6f},{y + s:.6f}M{x - s:.6f},{y + s:.6f}'
                          f'L{x + s:.6f},{y - s:.6f}" stroke="{color}" stroke-width="{1.5 * self.unit:.6f}"/>')

    def text(self, s: str):
        x, y = self.vb[0] + 3 * self.unit, self.vb[1] + 12 * self.unit
        self.items.append(f'<text x="{x:.6f}" y="{y:.6f}" font-size="{10 * self.unit:.6f}" '
                          f'font-family="sans-serif">{escape(s)}</text>')

    def render(self) -> str:
        vb = " ".join(f"{v:.6f}" for v in self.vb)
        body = "\n".join(self.items)
        return ('<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{vb}" '
                f'width="600" height="{600 * self.vb[3] / self.vb[2]:.0f}">\n'
                f"<title>{escape(self.title)}</title>\n{body}\n</svg>\n")


def _bbox(polys) -> tuple[float, float, float, float]:
    pts = np.array([p for poly in polys for p in poly], dtype=float).reshape(-1, 2)
    return float(pts[:, 0].min()), float(pts[:, 0].max()), float(pts[:, 1].min()), float(pts[:, 1].max())


def claim_svg(claim, certificate=None) -> str:
    """Region (solid at d_lo, dashed at d_hi for swept claims), cover disks,
    tangency points and any counterexample."""
    pieces = RG.to_dnf(claim.region)
    d_lo, d_hi = claim.d_range
    layers = [(d_lo, False)] + ([] if claim.fixed_d else [(d_hi, True)])
    drawn = [(piece_polygon(p, d), dashed) for d, dashed in layers for p in pieces]
    canvas = _Canvas(_bbox([poly for poly, _ in drawn if poly]), f"{claim.id}: {claim.title}")
    for poly, dashed in drawn:
        canvas.polygon(poly, "#9ecae1", "#08519c", dashed, 0.15 if dashed else 0.45)
    for disk in claim.disks:
        canvas.circle(disk.center.x, disk.center.y, disk.radius, "#d95f02")
        canvas.dot(disk.center, "#d95f02", 1.5)
    status = ""
    if certificate is not None:
        status = f" [{certificate.status}]"
        for t in certificate.tangencies:
            canvas.dot((t.x, t.y), "#1b9e77")
        if certificate.counterexample:
            canvas.cross(certificate.counterexample["point"], "#e31a1c")
    canvas.text(f"{claim.id}{status}")
    return canvas.render()


def family_svg(family: Family, points=None, title: str = "family") -> str:
    outlines = []
    for s in family.sets:
        if isinstance(s.shape, Disk):
            c, r = s.shape.center, s.shape.radius
            outlines.append([(c.x - r, c.y - r), (c.x + r, c.y + r)])
        else:
            outlines.append([tuple(v) for v in s.shape.vertices])
    canvas = _Canvas(_bbox(outlines), title)
    for s in family.sets:
        if isinstance(s.shape, Disk):
            canvas.circle(s.shape.center.x, s.shape.center.y, s.shape.radius, "#08519c", "#9ecae1")
        else:
            canvas.polygon([tuple(v) for v in s.shape.vertices], "#9ecae1", "#08519c", opacity=0.25)
        canvas.dot(s.center, "#08519c", 1.0)
    for p in points or []:
        canvas.cross(p, "#e31a1c")
    canvas.text(title)
    return canvas.render()
