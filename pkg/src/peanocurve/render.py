"""Deterministic SVG rendering of a step curve over its continuum."""
from __future__ import annotations

from .continuum import Continuum
from .paths import ParamCurve


def _f(x: float) -> str:
    return "%.6f" % x


def render_svg(curve: ParamCurve, X: Continuum, width: int = 600) -> str:
    """Polyline through the breakpoint cells, drawn over faint cell squares.

    The viewBox is the bounding box of the cells; a zero extent (e.g. an
    interval) is widened by one cell spacing so the picture stays visible.
    """
    if len(curve) == 0:
        raise ValueError("cannot render an empty curve")
    x0, y0, x1, y1 = X.bbox
    h = X.edge_length or 1.0
    w_box, h_box = x1 - x0, y1 - y0
    if w_box == 0:
        x0, w_box = x0 - h / 2, h
    if h_box == 0:
        y0, h_box = y0 - h / 2, h
    height = max(1, round(width * h_box / w_box))
    cell = 0.9 * h
    stroke = h / 4
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_f(x0)} {_f(y0)} {_f(w_box)} {_f(h_box)}">',
        '<g fill="#dddddd" stroke="none">',
    ]
    for x, y in X.coords:
        out.append(f'<rect x="{_f(x - cell / 2)}" y="{_f(y - cell / 2)}" '
                   f'width="{_f(cell)}" height="{_f(cell)}"/>')
    out.append("</g>")
    pts = " ".join(f"{_f(X.coords[c][0])},{_f(X.coords[c][1])}" for c in curve.cells)
    out.append(f'<polyline fill="none" stroke="#b03030" stroke-width="{_f(stroke)}" '
               f'stroke-linejoin="round" points="{pts}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
