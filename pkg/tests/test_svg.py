from __future__ import annotations

import xml.etree.ElementTree as ET

import pytest

from fatpierce import certifier as C
from fatpierce.geometry import Point
from fatpierce.svg import claim_svg, family_svg, piece_polygon
from fatpierce import regions as RG

from conftest import disk_family

NS = "{http://www.w3.org/2000/svg}"


def _parse(text: str):
    assert text.startswith('<?xml version="1.0"')
    return ET.fromstring(text.split("\n", 1)[1])


@pytest.mark.parametrize("cid", sorted(C.ALL_CLAIMS))
def test_claim_figures_are_valid_svg(cid):
    claim = C.get_claim(cid)
    root = _parse(claim_svg(claim))
    assert root.tag == f"{NS}svg"
    assert cid in root.find(f"{NS}title").text
    assert len(root.findall(f"{NS}circle")) >= len(claim.disks)
    assert root.findall(f"{NS}polygon") or root.findall(f"{NS}polyline")


def test_counterexample_is_marked():
    claim = C.get_claim("F4")
    cert = C.Certificate("F4", C.REFUTED, counterexample={"point": [1.3284271247461905, -0.5], "d": 2.828})
    root = _parse(claim_svg(claim, cert))
    assert root.findall(f"{NS}path")
    assert "Refuted" in root.find(f"{NS}text").text


def test_family_figure():
    root = _parse(family_svg(disk_family([(0, 0), (2, 0)]), [Point(0, 0), Point(2, 0)], "a & b"))
    assert len(root.findall(f"{NS}circle")) == 4
    assert len(root.findall(f"{NS}path")) == 2
    assert root.find(f"{NS}title").text == "a & b"


def test_piece_polygon_unit_disk():
    poly = piece_polygon((("disk", RG.Affine(0), RG.Affine(0), RG.Affine(1)),), 1.0)
    assert len(poly) >= 200
    assert all(abs(x * x + y * y) <= 1 + 1e-9 for x, y in poly)
