from __future__ import annotations

import math

import pytest

from fatpierce.fatsets import Family, FatSet, Mode
from fatpierce.geometry import ConvexPolygon, Disk, Point, SimplePolygon


def disk_set(x, y, rho=1.0, core=None) -> FatSet:
    """Concentric fat disk: shape B((x, y), rho) with witness (x, y)."""
    return FatSet(Disk(Point(x, y), rho), Point(x, y), rho if core is None else core)


def disk_family(centers, rho=1.0, r=None, mode=Mode.P22) -> Family:
    return Family(tuple(disk_set(x, y, rho) for x, y in centers), rho if r is None else r, mode)


def square(cx, cy, half) -> ConvexPolygon:
    return ConvexPolygon(((cx - half, cy - half), (cx + half, cy - half),
                          (cx + half, cy + half), (cx - half, cy + half)))


def rigid(p, theta, tx, ty) -> Point:
    c, s = math.cos(theta), math.sin(theta)
    return Point(c * p[0] - s * p[1] + tx, s * p[0] + c * p[1] + ty)


def move_family(f: Family, theta, tx, ty) -> Family:
    """Image of a family under a rotation by theta followed by a translation."""
    out = []
    for s in f.sets:
        if isinstance(s.shape, Disk):
            shape = Disk(rigid(s.shape.center, theta, tx, ty), s.shape.radius)
        else:
            cls = ConvexPolygon if isinstance(s.shape, ConvexPolygon) else SimplePolygon
            shape = cls(tuple(rigid(v, theta, tx, ty) for v in s.shape.vertices))
        out.append(FatSet(shape, rigid(s.center, theta, tx, ty), s.core_radius))
    return Family(tuple(out), f.r, f.mode)


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the lines are repeated in the terminal summary."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def log(number: int, ok: bool, detail: str):
        line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        lines.append(line)
        print(line)
        return ok

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
