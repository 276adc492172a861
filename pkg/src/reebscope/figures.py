"""SVG drawings of toric diagrams on the integer lattice."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from reebscope.polytope import LatticePolygon

PITCH = 24
MARGIN = 1
PANEL_GAP = 2


def _bounds(polys: Sequence[LatticePolygon]) -> tuple[int, int, int, int]:
    xs = [x for P in polys for x, _ in P.vertices] + [0]
    ys = [y for P in polys for _, y in P.vertices] + [0]
    return min(xs) - MARGIN, max(xs) + MARGIN, min(ys) - MARGIN, max(ys) + MARGIN


def _panel(P: LatticePolygon, offset_x: int, ymax: int, label: str | None) -> tuple[list[str], int]:
    x0, x1, y0, y1 = _bounds([P])

    def px(x: int) -> int:
        return offset_x + (x - x0) * PITCH

    def py(y: int) -> int:
        return (ymax - y) * PITCH

    parts = ['<g class="grid" stroke="#999999" stroke-width="0.5" stroke-dasharray="2,2">']
    for x in range(x0, x1 + 1):
        parts.append(f'<line x1="{px(x)}" y1="{py(y1)}" x2="{px(x)}" y2="{py(y0)}"/>')
    for y in range(y0, y1 + 1):
        parts.append(f'<line x1="{px(x0)}" y1="{py(y)}" x2="{px(x1)}" y2="{py(y)}"/>')
    parts.append("</g>")
    pts = " ".join(f"{px(x)},{py(y)}" for x, y in P.vertices)
    tag = "polyline" if P.is_segment else "polygon"
    parts.append(f'<{tag} class="diagram" points="{pts}" fill="none" stroke="#000000" stroke-width="2"/>')
    for x, y in P.lattice_points():
        parts.append(f'<circle class="lattice-point" cx="{px(x)}" cy="{py(y)}" r="2" fill="#000000"/>')
    parts.append(f'<circle class="origin" cx="{px(0)}" cy="{py(0)}" r="4" fill="#000000"/>')
    if label:
        parts.append(
            f'<text x="{px(x0)}" y="{py(y0) + PITCH * 0.8:.1f}" font-family="sans-serif" font-size="12">{escape(label)}</text>'
        )
    return parts, (x1 - x0) * PITCH


def render_svg(P: LatticePolygon, panels: Sequence[LatticePolygon] = (), title: str | None = None) -> str:
    """The diagram followed, left to right, by optional summand panels."""
    polys = [P, *panels]
    ymax = max(_bounds([Q])[3] for Q in polys)
    ymin = min(_bounds([Q])[2] for Q in polys)
    body: list[str] = []
    offset = 0
    for i, Q in enumerate(polys):
        label = title if i == 0 else f"summand {i}"
        parts, width = _panel(Q, offset, ymax, label)
        body.extend(parts)
        offset += width + PANEL_GAP * PITCH
    width = offset - PANEL_GAP * PITCH
    height = (ymax - ymin + 1) * PITCH
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"
