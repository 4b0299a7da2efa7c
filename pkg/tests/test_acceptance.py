"""Acceptance suite: one CRITERION line per criterion, PASS or FAIL.

Run with ``pytest tests/test_acceptance.py -s`` (lines are also repeated in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import math
import sys
import time

import numpy as np
import pytest

from fatpierce import certifier as C
from fatpierce.fatsets import Mode, dumps, save_family
from fatpierce.generator import GenSpec, generate, scatter_family
from fatpierce.oracle import exact_piercing_number, sampling_fallback_tau
from fatpierce.pq import common_point, has_pq_property, matching_number
from fatpierce.solver import pierce

from conftest import move_family

# pinned tolerances and budgets
CERT_DEPTH = 14
CERT_DELTA = 2.0 ** -12
CERT_SECONDS = 60.0
MEMBER_TOL = 1e-9
STRIP_TARGET, STRIP_TOL, STRIP_SECONDS = 1.870829, 1e-5, 10.0
NESTING_SAMPLES = 10 ** 6
EQUIV_TOL = 1e-6
BOUNDS_22 = {0.85: 4, 0.70: 5, 0.50: 9}
BOUNDS_43 = {0.85: 4, 0.70: 5, 0.50: 10}
ANCHOR_DS = (2.5, 3.0, 3.5, 3.9)
FAMILIES_PER_R = 500
N_SETS = 40

_certs: dict[tuple[str, int], C.Certificate] = {}


def _certify(cid: str, workers: int = 1) -> tuple[C.Certificate, float]:
    t = time.perf_counter()
    cert = C.certify_cover(C.CORE_CLAIMS[cid](), CERT_DEPTH, CERT_DELTA, workers)
    return cert, time.perf_counter() - t


def _pierced(f, points) -> bool:
    pts = np.array(points, dtype=float).reshape(-1, 2)
    return all(s.contains_many(pts, MEMBER_TOL).any() for s in f.sets)


def test_criterion_1_cover_claims(criterion):
    bad, parts = [], []
    for cid in sorted(C.CORE_CLAIMS):
        cert, secs = _certify(cid)
        _certs[(cid, 1)] = cert
        parts.append(f"{cid} {cert.status} {secs:.1f}s")
        if cert.status != C.CONFIRMED or secs >= CERT_SECONDS:
            bad.append(cid)
        if cid == "F3":
            at4 = [t for t in cert.tangencies if t.d_lo <= 4.0 <= t.d_hi]
            parts.append(f"F3 tangency at d=4: {at4[0].exact if at4 else 'none'}")
            if not at4:
                bad.append("F3-tangency")
    detail = "; ".join(parts)
    assert criterion(1, not bad, detail), f"not confirmed: {bad}"


def _bound_run(mode: Mode, bounds: dict, seed_base: int, anchored: bool):
    failures, worst = [], {}
    for k, (r, bound) in enumerate(bounds.items()):
        worst[r] = 0
        for i in range(FAMILIES_PER_R):
            kw = {}
            if anchored and i % 2:
                kw = dict(style="anchored", anchor_distance=ANCHOR_DS[(i // 2) % len(ANCHOR_DS)])
            spec = GenSpec(N_SETS, r, mode, 0.5, seed=seed_base + 10_000 * k + i, **kw)
            f = generate(spec)
            try:
                res = pierce(f)
            except Exception as exc:   # any solver error is a failure here
                failures.append((r, i, type(exc).__name__))
                continue
            worst[r] = max(worst[r], len(res.points))
            if len(res.points) > bound or not _pierced(f, res.points):
                failures.append((r, i, len(res.points)))
    return failures, worst


def test_criterion_2_bounds_22(criterion):
    failures, worst = _bound_run(Mode.P22, BOUNDS_22, 0, anchored=False)
    detail = ", ".join(f"r={r}: max {worst[r]} <= {b}" for r, b in BOUNDS_22.items())
    assert criterion(2, not failures, f"{3 * FAMILIES_PER_R} families; {detail}; failures {len(failures)}"), failures[:5]


def test_criterion_3_bounds_43(criterion):
    failures, worst = _bound_run(Mode.P43, BOUNDS_43, 1_000_000, anchored=True)
    detail = ", ".join(f"r={r}: max {worst[r]} <= {b}" for r, b in BOUNDS_43.items())
    assert criterion(3, not failures, f"{3 * FAMILIES_PER_R} families (half anchored at d in {ANCHOR_DS}); "
                                      f"{detail}; failures {len(failures)}"), failures[:5]


def test_criterion_4_oracle(criterion):
    rs = (0.85, 0.7, 0.5)
    bad = []
    for seed in range(200):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 8))
        mode = (Mode.P22, Mode.P43)[seed % 2]
        f = generate(GenSpec(n, rs[seed % 3], mode, 0.5, seed=seed))
        tau, pts = exact_piercing_number(f)
        solver_n = len(pierce(f).points)
        grid_tau = sampling_fallback_tau(f, 0.01)
        if tau > solver_n or not _pierced(f, pts) or grid_tau != tau:
            bad.append((seed, tau, solver_n, grid_tau))
    assert criterion(4, not bad, f"200 families: tau <= solver, oracle points pierce, "
                                 f"grid 0.01 agrees; mismatches {len(bad)}"), bad[:5]


def test_criterion_5_strip_height(criterion):
    t = time.perf_counter()
    m = C.max_strip_height()
    secs = time.perf_counter() - t
    ok = abs(m - STRIP_TARGET) <= STRIP_TOL and secs < STRIP_SECONDS
    assert criterion(5, ok, f"max strip height {m:.9f} (target {STRIP_TARGET} +- {STRIP_TOL}) in {secs:.2f}s")


def test_criterion_6_nesting(criterion):
    rep = C.verify_nesting(NESTING_SAMPLES)
    assert criterion(6, rep.ok, f"{rep.samples} samples, witness {rep.witness}")


def test_criterion_7_invariants(criterion):
    # (p, 2) holds exactly when no p members are pairwise disjoint
    pq_bad = 0
    for seed in range(1000):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 9))
        p = int(rng.integers(2, n + 1))
        f = scatter_family(n, float(rng.choice([0.5, 0.7, 0.85])), seed, box=4.0)
        pq_bad += has_pq_property(f, p, 2).holds != (matching_number(f) <= p - 1)

    # Helly: a convex family whose triples all meet has a common point
    helly_bad = helly_live = 0
    for seed in range(1000):
        rng = np.random.default_rng(10_000 + seed)
        f = scatter_family(int(rng.integers(4, 6)), 0.7, 10_000 + seed, box=2.0)
        if has_pq_property(f, 3, 3).holds:
            helly_live += 1
            helly_bad += common_point(f.sets) is None

    # rigid motions commute with pierce
    eq_bad = 0
    rng = np.random.default_rng(7)
    for seed in range(100):
        mode = (Mode.P22, Mode.P43)[seed % 2]
        f = generate(GenSpec(int(rng.integers(4, 20)), float(rng.choice([0.5, 0.7, 0.85])), mode, 0.5,
                             seed=20_000 + seed))
        th, tx, ty = rng.uniform(0, 2 * math.pi), *rng.uniform(-5, 5, 2)
        a, b = pierce(f), pierce(move_family(f, th, tx, ty))
        c, s = math.cos(th), math.sin(th)
        moved = np.array(a.points) @ np.array([[c, s], [-s, c]]) + (tx, ty)
        same = a.case_id == b.case_id and len(a.points) == len(b.points)
        eq_bad += not (same and np.abs(moved - np.array(b.points)).max() <= EQUIV_TOL)

    ok = pq_bad == helly_bad == eq_bad == 0
    assert criterion(7, ok, f"(p,2) vs nu: {pq_bad}/1000 bad; Helly: {helly_bad}/{helly_live} bad "
                            f"(1000 families, {helly_live} with all triples meeting); "
                            f"equivariance: {eq_bad}/100 bad")


def test_criterion_8_determinism(criterion):
    mismatches = []
    for cid in sorted(C.CORE_CLAIMS):
        first = _certs.get((cid, 1)) or _certify(cid)[0]
        again = _certify(cid)[0]
        four = _certify(cid, workers=4)[0]
        docs = {dumps(c.to_doc()) for c in (first, again, four)}
        if len(docs) != 1:
            mismatches.append(cid)
    for seed in range(20):
        spec = GenSpec(25, (0.85, 0.7, 0.5)[seed % 3], (Mode.P22, Mode.P43)[seed % 2], 0.5, seed=seed)
        f1, f2 = generate(spec), generate(spec)
        if dumps(save_family(f1)) != dumps(save_family(f2)):
            mismatches.append(f"family {seed}")
        if dumps(pierce(f1).to_doc()) != dumps(pierce(f2).to_doc()):
            mismatches.append(f"piercing {seed}")
    assert criterion(8, not mismatches, f"certificates (runs x2, workers 1 and 4) and 20 piercing/family "
                                        f"documents byte-identical; mismatches {mismatches}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
