"""
Tests for core.pattern_export: flat crease pattern and SVG output
"""

import math
import xml.etree.ElementTree as ET

import pytest

from core.exceptions import ExportError
from core.mass_model import envelope_terms
from core.pattern_export import BOUNDARY, MOUNTAIN, VALLEY, SvgStyle, export_svg, unfold

SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def pattern(nominal_params, inputs):
    return unfold(nominal_params, inputs)


def test_panel_and_crease_counts(pattern):
    n, m = 7, 4
    assert len(pattern.panels) == 2 * n * m
    assert len(pattern.creases) == m * n + m * (n + 1) + (m + 1) * n
    assert pattern.crease_counts() == {VALLEY: 28, MOUNTAIN: 45, BOUNDARY: 22}


def test_crease_lengths_match_tube_classes(pattern, nominal_geom):
    for crease in pattern.creases:
        dy = abs(crease.end[1] - crease.start[1])
        if crease.kind == VALLEY:
            assert crease.length == pytest.approx(nominal_geom.d_g)
        elif dy < 1e-9:
            assert crease.length == pytest.approx(nominal_geom.s)
        else:
            assert crease.length == pytest.approx(nominal_geom.b_g)


def test_areas_match_envelope_terms(pattern, nominal_geom, inputs):
    terms = envelope_terms(nominal_geom, inputs, 7, 4)
    assert pattern.wall_area() / 1e6 == pytest.approx(terms.walls_m2)
    assert pattern.cap_area() / 1e6 == pytest.approx(terms.caps_m2)
    assert pattern.sheath_area() / 1e6 == pytest.approx(terms.sheath_m2)


def test_pattern_is_normalized_to_origin(pattern):
    min_x, min_y, max_x, max_y = pattern.bounding_box
    assert min_x == pytest.approx(0.0, abs=1e-9)
    assert min_y == pytest.approx(0.0, abs=1e-9)
    assert max_x > pattern.row_width


def test_sheath_strips_fit_the_sheet_width(pattern, inputs):
    assert pattern.sheaths
    for _, length, width in pattern.sheaths:
        assert length <= pattern.row_width + 1e-9
        assert width == inputs.t_sheath


def test_seam_tabs_only_with_inputs(nominal_params):
    bare = unfold(nominal_params)
    assert bare.seam_tabs == []
    assert bare.sheaths == []
    assert len(bare.caps) == 2


def test_caps_are_regular_polygons(pattern, nominal_params):
    for cap in pattern.caps:
        assert len(cap) == 7
        for a, b in zip(cap, cap[1:] + cap[:1]):
            assert math.dist(a, b) == pytest.approx(2 * nominal_params.R * math.sin(math.pi / 7))


def test_svg_structure(pattern):
    document = export_svg(pattern)
    root = ET.fromstring(document.encode("utf-8"))
    assert root.tag == f"{SVG_NS}svg"
    assert root.attrib["width"].endswith("mm")
    paths = root.findall(f".//{SVG_NS}path")
    assert len(paths) == 56 + 95
    classes = [p.attrib["class"] for p in paths]
    assert classes.count("panel") == 56
    assert classes.count(VALLEY) == 28
    assert len(root.findall(f".//{SVG_NS}polygon[@class='cap']")) == 2
    assert len(root.findall(f".//{SVG_NS}rect")) == len(pattern.sheaths)


def test_svg_is_deterministic(nominal_params, inputs):
    first = export_svg(unfold(nominal_params, inputs))
    second = export_svg(unfold(nominal_params, inputs))
    assert first == second


def test_svg_style_colors(pattern):
    document = export_svg(pattern, style=SvgStyle(mountain_color="#ff0000"))
    assert "stroke:#ff0000" in document


def test_svg_written_to_file(tmp_path, pattern):
    path = tmp_path / "pattern.svg"
    document = export_svg(pattern, str(path))
    assert path.read_text(encoding="utf-8") == document


def test_svg_write_failure(tmp_path, pattern):
    with pytest.raises(ExportError):
        export_svg(pattern, str(tmp_path / "missing" / "pattern.svg"))
