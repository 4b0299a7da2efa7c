from __future__ import annotations

import math

import numpy as np
import sympy as sp

from fatpierce import constants as K
from fatpierce import regions as RG
from fatpierce.geometry import Interval

S8 = math.sqrt(8)


def test_affine_parses_linear_expressions():
    a = RG.Affine.of(K.SQRT8 - RG.D)
    assert a.a == K.SQRT8 and a.b == -1
    assert a.at(1.0) == S8 - 1


def test_dnf_of_union_and_intersection():
    reg = RG.Union((RG.disk(0, 0, 1), RG.Intersect((RG.disk(1, 0, 1), RG.HStrip(1, -1)))))
    pieces = RG.to_dnf(reg)
    assert len(pieces) == 2 and len(pieces[1]) == 3


def test_lens_envelope_contains_anchor_track():
    pieces = RG.to_dnf(RG.lens_envelope())
    for d in (2.1, 2.5, 2.8):
        assert RG.region_contains(pieces, S8 - d, 0.0, S8)
    # the lens itself at d = sqrt8 does not contain those anchors
    lens = RG.to_dnf(RG.lens_small_d())
    assert not RG.region_contains(lens, S8 - 2.5, 0.0, S8)


def test_rigorous_and_exact_membership():
    piece = RG.to_dnf(RG.disk(K.SQRT2, 2 - K.SQRT2, K.R_BIG))[0]
    assert RG.piece_contains_exact(piece, 2 * K.SQRT2 - 2, 0, 0)
    # the outward normal at the tangency points along (-1, 1)
    assert not RG.piece_contains_exact(piece, 2 * K.SQRT2 - 2 - sp.Rational(1, 10 ** 30), 0, 0)
    assert RG.piece_contains_exact(piece, 2 * K.SQRT2 - 2 + sp.Rational(1, 10 ** 30), 0, 0)
    assert RG.piece_contains_rigorous(piece, 1.4, 0.5, Interval(0.0))
    assert not RG.piece_contains_rigorous(piece, S8 - 2, 0.0, Interval(0.0))   # boundary is not provable


def test_is_exact_zero():
    assert RG.is_exact_zero(sp.sqrt(8) - 2 * sp.sqrt(2))
    assert RG.is_exact_zero((2 - sp.sqrt(2)) ** 2 * 2 - (sp.sqrt(8) - 2) ** 2)
    assert not RG.is_exact_zero(sp.sqrt(2) - sp.Rational(14142135623730951, 10 ** 16))


def test_to_interval_encloses():
    for e in (K.SQRT8, K.R_BIG, K.STRIP_TOP, sp.cos(sp.pi * sp.Rational(6, 25))):
        iv = K.to_interval(e)
        assert iv.lo <= float(sp.N(e, 30)) <= iv.hi
    assert K.to_interval(sp.Rational(1, 2)).lo == 0.5 == K.to_interval(sp.Rational(1, 2)).hi


def test_rect_r_prime_shape():
    pieces = RG.to_dnf(RG.rect_r_prime())
    assert RG.region_contains(pieces, 0.1, 1 - math.sqrt(3.5) + 1e-9, S8)
    assert RG.region_contains(pieces, S8, -1.0, S8)
    assert not RG.region_contains(pieces, S8 - 2 + 0.1, -1.01, S8)
    assert not np.any(RG.region_contains(pieces, np.array([0.1]), np.array([0.01]), S8))
