from __future__ import annotations

import pytest

from fatpierce.fatsets import Mode, dumps, save_family, verify_fatness
from fatpierce.generator import GenerationFailed, GenSpec, generate, scatter_family
from fatpierce.geometry import ConvexPolygon, Disk
from fatpierce.pq import has_pq_property, intersects, matching_number


def test_single_set():
    f = generate(GenSpec(1, 0.9, Mode.P22, 0.0, seed=0))
    assert len(f) == 1 and isinstance(f[0].shape, Disk)


def test_mode22_large_family():
    f = generate(GenSpec(50, 0.85, Mode.P22, 0.5, seed=1))
    assert has_pq_property(f, 2, 2).holds


def test_mode43_anchored():
    f = generate(GenSpec(20, 0.7, Mode.P43, 0.5, seed=2, style="anchored", anchor_distance=3.0))
    assert has_pq_property(f, 4, 3).holds
    assert not intersects(f[0], f[1])
    assert matching_number(f) == 2


@pytest.mark.parametrize("style,mode", [("hub", Mode.P22), ("greedy", Mode.P22), ("hub", Mode.P43),
                                        ("greedy", Mode.P43), ("anchored", Mode.P43)])
def test_every_family_is_valid(style, mode):
    for seed in range(5):
        f = generate(GenSpec(12, 0.6, mode, 0.5, seed=seed, style=style))
        assert all(verify_fatness(s.shape, s.center, 0.6) for s in f.sets)
        p, q = (2, 2) if mode is Mode.P22 else (4, 3)
        assert has_pq_property(f, p, q).holds


def test_shape_mix_extremes():
    assert all(isinstance(s.shape, Disk) for s in generate(GenSpec(10, 0.7, shape_mix=0.0, seed=3)).sets)
    assert all(isinstance(s.shape, ConvexPolygon) for s in generate(GenSpec(10, 0.7, shape_mix=1.0, seed=3)).sets)


def test_same_seed_same_bytes():
    spec = GenSpec(15, 0.7, Mode.P43, 0.5, seed=2 ** 63 + 5)
    assert dumps(save_family(generate(spec))) == dumps(save_family(generate(spec)))
    other = GenSpec(15, 0.7, Mode.P43, 0.5, seed=6)
    assert dumps(save_family(generate(spec))) != dumps(save_family(generate(other)))


@pytest.mark.parametrize("kwargs", [dict(n=0, r=0.5), dict(n=3, r=0.0), dict(n=3, r=1.5),
                                    dict(n=3, r=0.5, seed=-1), dict(n=3, r=0.5, style="spiral"),
                                    dict(n=3, r=0.5, anchor_distance=1.5)])
def test_invalid_specs(kwargs):
    with pytest.raises(ValueError):
        GenSpec(**kwargs)


def test_retry_exhaustion(monkeypatch):
    import fatpierce.generator as G

    def always_fail(rng, spec):
        raise GenerationFailed("forced")

    monkeypatch.setattr(G, "_build", always_fail)
    with pytest.raises(GenerationFailed, match="100 attempts"):
        generate(GenSpec(4, 0.7, seed=0))


def test_scatter_family_is_deterministic_and_fat():
    a, b = scatter_family(8, 0.6, seed=4), scatter_family(8, 0.6, seed=4)
    assert a == b
    assert all(verify_fatness(s.shape, s.center, 0.6) for s in a.sets)
