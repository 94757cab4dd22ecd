"""Plane-representation SVG rendering.

The cylinder is cut along x = 0 and unrolled into a strip: a direct edge
appears as one polyline, a wrapping edge as two pieces that leave the right
border and re-enter at the left border at the same height. One <path>
element per edge; a wrapping edge contributes two subpaths (two M commands)
to its path, so piece counts are recoverable from the markup.

Output is deterministic for a fixed drawing and style: fixed attribute
order, fixed decimal precision, edges sorted by vertex pair, vertices in
x order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .geometry import Drawing, EdgeCurve, split_circular

Pair = Tuple[int, int]

_MARGIN = 40
_EDGE_STROKE = "#55606e"
_HL_STROKE = "#c8381d"
_CUT_STROKE = "#9a9a9a"
_VERTEX_FILL = "#1b1f24"


@dataclass(frozen=True)
class RenderStyle:
    """Pixel geometry and emphasis switches for :func:`render_svg`.

    highlight holds edge pairs to emphasize (endpoint order ignored);
    show_cut draws the cut line as dashed verticals on both borders.
    """

    width: int = 900
    height: int = 480
    highlight: frozenset = frozenset()
    show_cut: bool = True
    label_vertices: bool = False

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError("render dimensions must be positive")


def _norm(p: Pair) -> Pair:
    a, b = p
    return (a, b) if a <= b else (b, a)


def _edge_pieces(e: EdgeCurve) -> List[Sequence[Tuple[Fraction, Fraction]]]:
    """Cylinder-frame polylines of an edge: one for direct, two for
    wrapping (left piece first)."""
    if not e.circular:
        return [e.points]
    neg, pos = split_circular(e)
    left = [(x - 1, y) for x, y in neg.points]
    return [left, list(pos.points)]


def render_svg(d: Drawing, style: RenderStyle = RenderStyle()) -> str:
    """Render the plane representation of a drawing as SVG text."""
    edges = sorted(d.edges, key=lambda e: e.pair)
    pieces = {e.pair: _edge_pieces(e) for e in edges}

    ys = [v.y for v in d.vertices]
    for ps in pieces.values():
        for p in ps:
            ys.extend(y for _, y in p)
    ylo, yhi = (min(ys), max(ys)) if ys else (Fraction(0), Fraction(1))
    if ylo == yhi:
        ylo, yhi = ylo - 1, yhi + 1
    yspan = float(yhi - ylo)

    w, h, m = style.width, style.height, _MARGIN
    sx = w - 2 * m
    sy = h - 2 * m

    def px(x: Fraction) -> float:
        return m + float(x) * sx

    def py(y: Fraction) -> float:
        return h - m - (float(y - ylo) / yspan) * sy

    out: List[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
    ]

    if style.show_cut:
        for cx in (px(Fraction(0)), px(Fraction(1))):
            out.append(
                f'<line class="cut" x1="{cx:.2f}" y1="{m}" x2="{cx:.2f}" '
                f'y2="{h - m}" stroke="{_CUT_STROKE}" stroke-width="1" '
                f'stroke-dasharray="6 4"/>'
            )

    hl = frozenset(_norm(p) for p in style.highlight)
    for e in edges:
        subpaths = []
        for p in pieces[e.pair]:
            coords = " L ".join(f"{px(x):.2f} {py(y):.2f}" for x, y in p)
            subpaths.append(f"M {coords}")
        dd = " ".join(subpaths)
        if _norm(e.pair) in hl:
            cls, stroke, width = "edge hl", _HL_STROKE, "2.4"
        else:
            cls, stroke, width = "edge", _EDGE_STROKE, "1.2"
        out.append(
            f'<path class="{cls}" d="{dd}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width}"/>'
        )

    for v in d.vertices:
        cx, cy = px(v.x), py(v.y)
        out.append(
            f'<circle class="vertex" cx="{cx:.2f}" cy="{cy:.2f}" r="3" '
            f'fill="{_VERTEX_FILL}"/>'
        )
        if style.label_vertices:
            out.append(
                f'<text class="label" x="{cx + 4:.2f}" y="{cy - 4:.2f}" '
                f'font-size="11" font-family="monospace">{v.id}</text>'
            )

    out.append("</svg>")
    return "\n".join(out) + "\n"


def count_pieces(svg: str) -> int:
    """Visible edge pieces in rendered output (subpath count over all edge
    paths). Kept next to the renderer so tests and the piece contract stay
    in one place."""
    total = 0
    for line in svg.splitlines():
        if line.startswith('<path class="edge'):
            total += line.count("M ")
    return total
