"""
Pattern Export - flat crease pattern of the envelope and its SVG document

Handles:
- Unfolding the m x n wall panels into rows of parallelograms
- Mountain / valley / boundary crease tagging
- Cap polygons, sheath strips and seam-allowance tabs as separate pieces
- Deterministic SVG 1.1 output in millimeter user units

Version: 1.0.0
"""

import io
import math
import logging
from dataclasses import dataclass, field
from typing import Dict, Any, List, Optional, Tuple
from xml.sax.saxutils import XMLGenerator

from core.exceptions import ExportError
from core.kresling_geometry import KreslingParams, derive_segment
from core.mass_model import DesignInputs, tube_length

logger = logging.getLogger(__name__)

Point = Tuple[float, float]

MOUNTAIN = "mountain"
VALLEY = "valley"
BOUNDARY = "boundary"
CREASE_KINDS = (MOUNTAIN, VALLEY, BOUNDARY)

# Gap between separate pieces on the sheet (mm)
PIECE_GAP_MM = 20.0


# =================== PATTERN TYPES ===================

@dataclass(frozen=True)
class Crease:
    start: Point
    end: Point
    kind: str

    @property
    def length(self) -> float:
        return math.dist(self.start, self.end)


@dataclass
class CreasePattern:
    """
    Flat envelope pattern in millimeters.

    panels: wall triangles; creases: tagged fold and cut lines of the wall
    sheet; caps, sheaths and seam_tabs are separate cut pieces.
    """
    panels: List[Tuple[Point, Point, Point]] = field(default_factory=list)
    creases: List[Crease] = field(default_factory=list)
    caps: List[List[Point]] = field(default_factory=list)
    sheaths: List[Tuple[Point, float, float]] = field(default_factory=list)  # (corner, length, width)
    seam_tabs: List[List[Point]] = field(default_factory=list)
    row_width: float = 0.0

    def _all_points(self) -> List[Point]:
        pts: List[Point] = [p for tri in self.panels for p in tri]
        pts += [p for c in self.creases for p in (c.start, c.end)]
        pts += [p for cap in self.caps for p in cap]
        pts += [p for tab in self.seam_tabs for p in tab]
        for (x, y), length, width in self.sheaths:
            pts += [(x, y), (x + length, y + width)]
        return pts

    @property
    def bounding_box(self) -> Tuple[float, float, float, float]:
        """(min_x, min_y, max_x, max_y); all zero for an empty pattern."""
        pts = self._all_points()
        if not pts:
            return (0.0, 0.0, 0.0, 0.0)
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return (min(xs), min(ys), max(xs), max(ys))

    @property
    def sheet_size(self) -> Tuple[float, float]:
        x0, y0, x1, y1 = self.bounding_box
        return (x1 - x0, y1 - y0)

    def wall_area(self) -> float:
        return sum(_triangle_area(*tri) for tri in self.panels)

    def cap_area(self) -> float:
        return sum(_polygon_area(cap) for cap in self.caps)

    def sheath_area(self) -> float:
        return sum(length * width for _, length, width in self.sheaths)

    def crease_counts(self) -> Dict[str, int]:
        counts = {kind: 0 for kind in CREASE_KINDS}
        for c in self.creases:
            counts[c.kind] += 1
        return counts

    def to_dict(self) -> Dict[str, Any]:
        width, height = self.sheet_size
        return {
            'panels': len(self.panels),
            'creases': self.crease_counts(),
            'caps': len(self.caps),
            'sheaths': len(self.sheaths),
            'seam_tabs': len(self.seam_tabs),
            'row_width_mm': self.row_width,
            'sheet_mm': [width, height],
            'wall_area_m2': self.wall_area() / 1e6,
            'cap_area_m2': self.cap_area() / 1e6,
            'sheath_area_m2': self.sheath_area() / 1e6,
        }


def _triangle_area(a: Point, b: Point, c: Point) -> float:
    return abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])) / 2.0


def _polygon_area(poly: List[Point]) -> float:
    acc = 0.0
    for i, (x0, y0) in enumerate(poly):
        x1, y1 = poly[(i + 1) % len(poly)]
        acc += x0 * y1 - x1 * y0
    return abs(acc) / 2.0


# =================== UNFOLD ===================

def unfold(params: KreslingParams, inputs: Optional[DesignInputs] = None) -> CreasePattern:
    """
    Flat crease pattern of the envelope.

    Row k holds n parallelograms with sides s and b_g, each split by a d_g
    diagonal at theta_g from the base; odd rows are mirrored. Sheath strips
    and seam tabs are only laid out when inputs are given.
    """
    geom = derive_segment(params, require_bistable=False)
    n, m = params.n, params.m
    s, d_g, theta = geom.s, geom.d_g, geom.theta_g
    rise = d_g * math.sin(theta)
    shift = d_g * math.cos(theta) - s

    pattern = CreasePattern(row_width=n * s)

    # Ring rows of vertices: rows[k][i], k = 0..m
    rows: List[List[Point]] = []
    x0 = 0.0
    for k in range(m + 1):
        rows.append([(x0 + i * s, k * rise) for i in range(n + 1)])
        x0 += shift if k % 2 == 0 else -shift

    for k in range(m):
        lo, up = rows[k], rows[k + 1]
        for i in range(n):
            if k % 2 == 0:
                pattern.panels.append((lo[i], lo[i + 1], up[i + 1]))
                pattern.panels.append((lo[i], up[i + 1], up[i]))
                pattern.creases.append(Crease(lo[i], up[i + 1], VALLEY))
            else:
                pattern.panels.append((lo[i], lo[i + 1], up[i]))
                pattern.panels.append((lo[i + 1], up[i + 1], up[i]))
                pattern.creases.append(Crease(lo[i + 1], up[i], VALLEY))
        for i in range(n + 1):
            kind = BOUNDARY if i in (0, n) else MOUNTAIN
            pattern.creases.append(Crease(lo[i], up[i], kind))

    for k in range(m + 1):
        kind = BOUNDARY if k in (0, m) else MOUNTAIN
        for i in range(n):
            pattern.creases.append(Crease(rows[k][i], rows[k][i + 1], kind))

    # Caps above the wall sheet, side by side
    top = max(p[1] for row in rows for p in row)
    xs_min = min(p[0] for row in rows for p in row)
    R = params.R
    for c in range(2):
        cx = xs_min + R + c * (2.0 * R + PIECE_GAP_MM)
        cy = top + PIECE_GAP_MM + R
        pattern.caps.append([
            (cx + R * math.cos(2.0 * geom.phi * i), cy + R * math.sin(2.0 * geom.phi * i))
            for i in range(n)
        ])

    if inputs is not None:
        # Seam allowance along the closing b_g edge of every row, outside the sheet
        for k in range(m):
            a, b = rows[k][0], rows[k + 1][0]
            dx, dy = b[0] - a[0], b[1] - a[1]
            norm = math.hypot(dx, dy)
            ox, oy = -dy / norm * inputs.t_ovlp, dx / norm * inputs.t_ovlp
            pattern.seam_tabs.append([a, b, (b[0] + ox, b[1] + oy), (a[0] + ox, a[1] + oy)])

        L_sheath = (tube_length(geom, n, m) - d_g * n * m) * inputs.r_pct / 100.0
        strip_y = min(p[1] for p in pattern._all_points()) - PIECE_GAP_MM - inputs.t_sheath
        remaining = L_sheath
        while remaining > 1e-9 and inputs.t_sheath > 0:
            length = min(remaining, pattern.row_width)
            pattern.sheaths.append(((xs_min, strip_y), length, inputs.t_sheath))
            remaining -= length
            strip_y -= inputs.t_sheath + PIECE_GAP_MM

    _normalize(pattern)
    logger.debug(
        f"unfold n={n} m={m} lam={params.lam}: {len(pattern.panels)} panels, "
        f"{len(pattern.creases)} creases, sheet {pattern.sheet_size[0]:.0f} x {pattern.sheet_size[1]:.0f} mm"
    )
    return pattern


def _normalize(pattern: CreasePattern) -> None:
    """Translate every piece so the bounding box min corner is (0, 0)."""
    min_x, min_y, _, _ = pattern.bounding_box

    def mv(p: Point) -> Point:
        return (p[0] - min_x, p[1] - min_y)

    pattern.panels = [(mv(a), mv(b), mv(c)) for a, b, c in pattern.panels]
    pattern.creases = [Crease(mv(c.start), mv(c.end), c.kind) for c in pattern.creases]
    pattern.caps = [[mv(p) for p in cap] for cap in pattern.caps]
    pattern.seam_tabs = [[mv(p) for p in tab] for tab in pattern.seam_tabs]
    pattern.sheaths = [(mv(corner), length, width) for corner, length, width in pattern.sheaths]


# =================== SVG ===================

@dataclass(frozen=True)
class SvgStyle:
    stroke_width_mm: float = 0.5
    mountain_color: str = "#1f4fd8"
    valley_color: str = "#1a9e3a"
    boundary_color: str = "#000000"
    valley_dash: str = "6,3"
    panel_fill: str = "none"
    piece_color: str = "#c0392b"

    def css(self) -> str:
        w = self.stroke_width_mm
        return (
            f"path.panel{{fill:{self.panel_fill};stroke:none}}"
            f"path.mountain{{fill:none;stroke:{self.mountain_color};stroke-width:{w}}}"
            f"path.valley{{fill:none;stroke:{self.valley_color};stroke-width:{w};stroke-dasharray:{self.valley_dash}}}"
            f"path.boundary{{fill:none;stroke:{self.boundary_color};stroke-width:{w}}}"
            f"polygon.cap,rect.sheath{{fill:none;stroke:{self.piece_color};stroke-width:{w}}}"
            f"polygon.seam{{fill:none;stroke:{self.piece_color};stroke-width:{w};stroke-dasharray:2,2}}"
        )


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def _points_attr(points) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)


def export_svg(pattern: CreasePattern, path: Optional[str] = None, style: Optional[SvgStyle] = None) -> str:
    """
    Render the pattern as an SVG document; write it to path when given.

    One <path> per panel and per crease, in pattern order, so identical
    patterns give byte-identical documents.

    Raises:
        ExportError: the file cannot be written
    """
    style = style or SvgStyle()
    width, height = pattern.sheet_size
    buffer = io.StringIO()
    xml = XMLGenerator(buffer, "utf-8", short_empty_elements=True)
    xml.startDocument()
    xml.startElement("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "version": "1.1",
        "width": f"{_fmt(width)}mm",
        "height": f"{_fmt(height)}mm",
        "viewBox": f"0 0 {_fmt(width)} {_fmt(height)}",
    })
    xml.startElement("defs", {})
    xml.startElement("style", {"type": "text/css"})
    xml.characters(style.css())
    xml.endElement("style")
    xml.endElement("defs")

    xml.startElement("g", {"id": "panels"})
    for a, b, c in pattern.panels:
        d = f"M {_fmt(a[0])},{_fmt(a[1])} L {_fmt(b[0])},{_fmt(b[1])} L {_fmt(c[0])},{_fmt(c[1])} Z"
        xml.startElement("path", {"class": "panel", "d": d})
        xml.endElement("path")
    xml.endElement("g")

    xml.startElement("g", {"id": "creases"})
    for crease in pattern.creases:
        (x0, y0), (x1, y1) = crease.start, crease.end
        xml.startElement("path", {
            "class": crease.kind,
            "d": f"M {_fmt(x0)},{_fmt(y0)} L {_fmt(x1)},{_fmt(y1)}",
        })
        xml.endElement("path")
    xml.endElement("g")

    xml.startElement("g", {"id": "pieces"})
    for cap in pattern.caps:
        xml.startElement("polygon", {"class": "cap", "points": _points_attr(cap)})
        xml.endElement("polygon")
    for tab in pattern.seam_tabs:
        xml.startElement("polygon", {"class": "seam", "points": _points_attr(tab)})
        xml.endElement("polygon")
    for (x, y), length, strip in pattern.sheaths:
        xml.startElement("rect", {
            "class": "sheath",
            "x": _fmt(x), "y": _fmt(y), "width": _fmt(length), "height": _fmt(strip),
        })
        xml.endElement("rect")
    xml.endElement("g")

    xml.endElement("svg")
    xml.endDocument()
    document = buffer.getvalue() + "\n"

    if path is not None:
        try:
            with open(path, 'w', encoding='utf-8', newline='\n') as fh:
                fh.write(document)
        except OSError as e:
            raise ExportError(f"cannot write SVG to {path}: {e}") from e
        logger.info(f"📐 SVG written: {path} ({len(pattern.panels)} panels, {len(pattern.creases)} creases)")
    return document
