from __future__ import annotations

import math

import numpy as np
import pytest

from fatpierce import constants as K
from fatpierce.fatsets import Family, Mode
from fatpierce.generator import GenSpec, generate
from fatpierce.solver import (
    EnvelopeViolation, NotIntersecting, PropertyViolation, decompose_43, grid_cover, grid_k, pierce,
    select_diameter_pair, strip_shift,
)

from conftest import disk_family, disk_set, move_family


def test_case_tables_verbatim():
    assert K.C311.centers[1] == (K.R("2.01"), K.R("1.053"))
    assert K.C312.centers[1] == (K.R("1.5739"), K.R("-0.6133"))
    assert K.C313.centers[0] == (K.SQRT2, 2 - K.SQRT2)
    assert K.C321.centers[2] == (K.R("2.445"), K.R("-0.456"))
    assert K.C321.centers[1] == (K.R("1.477"), K.R("0.6262"))
    assert K.C322.centers[0] == (K.SQRT2, K.R("0.43"))
    assert K.C311.radius_f == pytest.approx(math.sqrt(8) - 2)
    assert K.C321.radius_f == 0.68


def test_select_diameter_pair_examples():
    fr = select_diameter_pair(disk_family([(0, 0), (1, 0)]))
    assert (fr.d, fr.a_index, fr.b_index) == (1.0, 0, 1)
    fr = select_diameter_pair(disk_family([(0.5, 0.5)] * 3))
    assert (fr.d, fr.a_index, fr.b_index) == (0.0, 0, 1)
    # (3,0) and (0,1) are sqrt(10) apart, farther than (0,0)-(3,0)
    fr = select_diameter_pair(disk_family([(0, 0), (3, 0), (0, 1)]))
    assert (fr.a_index, fr.b_index) == (1, 2) and fr.d == pytest.approx(math.sqrt(10))


def test_frame_places_anchors():
    f = disk_family([(1, 2), (-0.4, 1.1), (0.3, 0.2)])
    fr = select_diameter_pair(f)
    img = fr.forward(f.centers)
    assert np.allclose(img[fr.b_index], (math.sqrt(8), 0))
    assert np.allclose(img[fr.a_index], (math.sqrt(8) - fr.d, 0))
    assert np.allclose(fr.inverse(img), f.centers)
    assert np.allclose(fr.flipped().inverse(fr.flipped().forward(f.centers)), f.centers)


def _anchored(others, mode=Mode.P43):
    """A at (0,0), B at (3,0) with radius-1 disks, then extra disks."""
    return disk_family([(0, 0), (3, 0)] + others, mode=mode)


def test_decompose_all_meet_both():
    f = _anchored([(1.5, 0), (1.5, 0.3)])
    dec, _ = decompose_43(f, select_diameter_pair(f))
    assert dec.f_b == () and dec.f_ab == (2, 3)


def test_decompose_one_meets_only_b():
    f = _anchored([(1.5, 0), (2.5, 0)])
    dec, _ = decompose_43(f, select_diameter_pair(f))
    assert dec.f_b == (3,) and dec.f_ab == (2,)


def test_decompose_swaps_roles():
    f = _anchored([(1.5, 0), (0.5, 0)])
    dec, frame = decompose_43(f, select_diameter_pair(f))
    assert (dec.a_index, dec.b_index) == (1, 0)
    assert np.allclose(frame.forward(f.centers)[0], (math.sqrt(8), 0))


def test_decompose_violation_carries_foursome():
    f = _anchored([(2.5, 0), (0.5, 0)])     # 2 misses A, 3 misses B
    with pytest.raises(PropertyViolation, match=r"\(4,3\)") as exc:
        decompose_43(f, select_diameter_pair(f))
    assert exc.value.foursome == (0, 1, 2, 3)


def test_strip_shift_examples():
    assert strip_shift(1.5, -0.2) == (1.5, False)
    assert strip_shift(0.3, -1.4) == (1.4, True)
    assert strip_shift(0.5, -0.5) == (1.0, False)
    with pytest.raises(EnvelopeViolation, match="envelope"):
        strip_shift(1.9, 0.0)


@pytest.mark.parametrize("r,k", [(0.5, 3), (1.0, 2), (0.2, 8)])
def test_grid_cover_examples(r, k):
    pts = grid_cover(r)
    assert grid_k(r) == k and len(pts) == k * k
    side = 2 / k
    assert side * math.sqrt(2) / 2 <= r + 1e-15
    assert min(p.x for p in pts) == pytest.approx(math.sqrt(8) - 2 + side / 2)
    assert max(p.y for p in pts) == pytest.approx(1 - side / 2)


def test_pierce_copies_of_one_disk():
    res = pierce(disk_family([(0, 0)] * 6))
    assert 1 <= len(res.points) <= 4
    assert all(disk_set(0, 0).contains(p) for p in res.points)


def test_pierce_three_tangent_disks():
    s3 = math.sqrt(3)
    res = pierce(disk_family([(0, 0), (2, 0), (1, s3)]))
    assert len(res.points) <= 4 and res.case_id == "SMALL"


def test_pierce_rejects_far_pair_in_mode22():
    f = disk_family([(0, 0), (2.5, 0), (1, 0.1), (1.2, 0)], rho=1.0)
    with pytest.raises(NotIntersecting, match="not intersecting"):
        pierce(f)


def test_pierce_mode43_d3_polygons():
    f = generate(GenSpec(40, 0.7, Mode.P43, 1.0, seed=4, style="anchored", anchor_distance=3.0))
    res = pierce(f)
    assert len(res.points) <= 5 and res.case_id in ("C321", "C322", "EMPTY_FAB")
    for s, h in zip(f.sets, res.per_set_hit):
        assert s.contains(res.points[h], 1e-9)


@pytest.mark.parametrize("mode", [Mode.P22, Mode.P43])
@pytest.mark.parametrize("r", [0.9, 0.75, 0.55, 0.3])
def test_bound_and_piercing(mode, r):
    k = grid_k(r)
    bound = 4 if r >= math.sqrt(8) - 2 else 5 if r >= 0.68 else k * k + (mode is Mode.P43)
    for seed in range(15):
        f = generate(GenSpec(25, r, mode, 0.5, seed=seed))
        res = pierce(f)
        assert len(res.points) <= min(bound, res.bound_used)
        for s, h in zip(f.sets, res.per_set_hit):
            assert s.contains(res.points[h], 1e-9)


def test_core_cover_soundness():
    """Table and grid cases: every witness center is within r of an emitted point."""
    for seed in range(20):
        f = generate(GenSpec(20, (0.9, 0.7, 0.5)[seed % 3], Mode.P22, 0.5, seed=seed))
        res = pierce(f)
        if res.case_id in ("C311", "C312", "C321", "GRID22"):
            pts = np.array(res.points)
            d = np.hypot(f.centers[:, None, 0] - pts[None, :, 0], f.centers[:, None, 1] - pts[None, :, 1])
            assert (d.min(axis=1) <= f.r + 1e-9).all()


def test_frame_height_envelope():
    for seed in range(20):
        f = generate(GenSpec(20, 0.7, Mode.P22, 0.5, seed=seed))
        fr = select_diameter_pair(f)
        assert np.abs(fr.forward(f.centers)[:, 1]).max() <= math.sqrt(3.5) + 1e-9


def test_equivariance_small_sample():
    rng = np.random.default_rng(0)
    for seed in range(10):
        f = generate(GenSpec(15, 0.7, Mode.P43, 0.5, seed=seed))
        th, tx, ty = rng.uniform(0, 2 * np.pi), *rng.uniform(-5, 5, 2)
        a, b = pierce(f), pierce(move_family(f, th, tx, ty))
        assert (a.case_id, a.bound_used) == (b.case_id, b.bound_used)
        c, s = math.cos(th), math.sin(th)
        moved = np.array(a.points) @ np.array([[c, s], [-s, c]]) + (tx, ty)
        assert np.abs(moved - np.array(b.points)).max() <= 1e-6


def test_result_document_shape():
    doc = pierce(generate(GenSpec(8, 0.9, Mode.P22, 0.5, seed=1))).to_doc()
    assert set(doc) == {"points", "bound_used", "case_id", "per_set_hit"}


def test_literal_five_disk_table_leaves_gap():
    """The printed five-disk table misses a point of R_2; the corrected one does not."""
    p = np.array([math.sqrt(8) - 1.5, -0.5])
    lit = np.array(K.C321.points)
    fixed = np.array(K.C321_FIXED.points)
    assert np.hypot(*(lit - p).T).min() > 0.68
    assert np.hypot(*(fixed - p).T).min() <= 0.68
