"""Exact cover constants.

Every constant is built once as a sympy expression; floats and outward-rounded
intervals are derived from those expressions, so no value is typed twice.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import sympy as sp

from .geometry import Interval, Point

SQRT8 = sp.sqrt(8)
SQRT2 = sp.sqrt(2)
R_BIG = SQRT8 - 2            # radius of the four/two-disk covers
R_MID = sp.Rational(68, 100)  # radius of the five/three-disk covers
STRIP_TOP = sp.sqrt(sp.Rational(7, 2))  # largest |y| of a frame center
D_MAX = sp.Integer(4)         # a set meeting both anchors forces d <= 4

SQRT8_F = float(SQRT8)
R_BIG_F = float(R_BIG)
R_MID_F = float(R_MID)
STRIP_TOP_F = float(STRIP_TOP)


def R(s: str) -> sp.Rational:
    """Decimal literal as an exact rational."""
    return sp.Rational(s)


def to_interval(expr) -> Interval:
    """Outward-rounded enclosure of an exact real expression."""
    e = sp.sympify(expr)
    if e.is_Rational:
        f = float(e)
        if sp.Rational(f) == e:        # exactly representable: no padding needed
            return Interval(f, f)
    return Interval.enclose(float(sp.N(e, 50)))


def to_float(expr) -> float:
    return float(sp.N(sp.sympify(expr), 30))


_P1 = (R_BIG * sp.cos(sp.Rational(6, 25) * sp.pi), R_BIG * sp.sin(sp.Rational(6, 25) * sp.pi))


@dataclass(frozen=True)
class CaseTable:
    name: str
    radius: sp.Expr
    centers: tuple[tuple[sp.Expr, sp.Expr], ...]
    note: str = ""

    @property
    def radius_f(self) -> float:
        return to_float(self.radius)

    @property
    def points(self) -> tuple[Point, ...]:
        return tuple(Point(to_float(x), to_float(y)) for x, y in self.centers)

    def __len__(self) -> int:
        return len(self.centers)


C311 = CaseTable("C311", R_BIG, (_P1, (R("2.01"), R("1.053")), (R("2.4972"), R("-0.115")), (R("1.64"), R("-0.33"))))
C312 = CaseTable("C312", R_BIG, (_P1, (R("1.5739"), R("-0.6133")), (R("2.5357"), R("-0.204")), (R("1.95"), R("0.7"))))
C313 = CaseTable("C313", R_BIG, ((SQRT2, 2 - SQRT2), (SQRT2, SQRT2 - 2)))
C321 = CaseTable(
    "C321", R_MID,
    ((R("0.49"), R("-0.465")), (R("1.477"), R("0.6262")), (R("2.445"), R("-0.456")),
     (R("1.435"), R("0.435")), (R("2.3162"), R("0.55"))),
)
C322 = CaseTable("C322", R_MID, ((SQRT2, R("0.43")), (R("1.1"), R("-0.5")), (R("1.7"), R("-0.5"))))

# The five-disk table as printed leaves the lower-middle part of the region
# uncovered (see the certifier's refutation of claim F4).  Flipping the sign of
# the second center's y-coordinate closes the gap; this corrected table is the
# one the solver emits.
C321_FIXED = CaseTable(
    "C321", R_MID,
    ((R("0.49"), R("-0.465")), (R("1.477"), R("-0.6262")), (R("2.445"), R("-0.456")),
     (R("1.435"), R("0.435")), (R("2.3162"), R("0.55"))),
    note="second center reflected to y = -0.6262",
)

TABLES = {t.name: t for t in (C311, C312, C313, C321, C322)}


@lru_cache(maxsize=None)
def interval_const(key: str) -> Interval:
    return to_interval({"sqrt8": SQRT8, "r_big": R_BIG, "r_mid": R_MID, "strip_top": STRIP_TOP}[key])
