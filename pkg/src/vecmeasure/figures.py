"""Deterministic SVG and CSV output for ranges and Q-sets."""
import io

import numpy as np

from . import __version__
from . import geometry as geo
from .ranges import compute_range, q_set

VIEW = (-0.35, -0.25, 1.1, 1.1)  # x0, y0, x1, y1 in measure coordinates
SCALE = 400.0


def _xy(x, y):
    x0, _, _, y1 = VIEW
    return (x - x0) * SCALE, (y1 - y) * SCALE


def _path(region):
    if region.is_empty:
        return ""
    pts = [_xy(x, y) for x, y in region.vertices]
    body = " L ".join(f"{X:.3f} {Y:.3f}" for X, Y in pts)
    return f"M {body} Z"


def render(rng, p, title=""):
    """SVG with the range dashed, its shift by ``p - mu(X)`` dotted and the Q-set shaded."""
    p = np.asarray(p, dtype=float)
    shifted = geo.translate(rng.region, p - rng.total)
    qs = q_set(rng, p)
    x0, y0, x1, y1 = VIEW
    w, h = (x1 - x0) * SCALE, (y1 - y0) * SCALE
    ox, oy = _xy(0.0, 0.0)
    px, py = _xy(*p)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- vecmeasure {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
        f'viewBox="0 0 {w:.0f} {h:.0f}">',
        f'<rect x="0" y="0" width="{w:.0f}" height="{h:.0f}" fill="white"/>',
        f'<line x1="0" y1="{oy:.3f}" x2="{w:.0f}" y2="{oy:.3f}" stroke="#999" stroke-width="1"/>',
        f'<line x1="{ox:.3f}" y1="0" x2="{ox:.3f}" y2="{h:.0f}" stroke="#999" stroke-width="1"/>',
        f'<path id="qset" d="{_path(qs)}" fill="#bbbbbb" stroke="none"/>',
        f'<path id="range" d="{_path(rng.region)}" fill="none" stroke="black" '
        f'stroke-width="2" stroke-dasharray="10 6"/>',
        f'<path id="shifted" d="{_path(shifted)}" fill="none" stroke="black" '
        f'stroke-width="2" stroke-dasharray="2 4"/>',
        f'<circle cx="{px:.3f}" cy="{py:.3f}" r="4" fill="black"/>',
        f'<text x="{px + 6:.3f}" y="{py - 6:.3f}" font-family="sans-serif" font-size="16">'
        f"p = ({p[0]:g}, {p[1]:g})</text>",
    ]
    if title:
        lines.append(f'<text x="12" y="24" font-family="sans-serif" font-size="18">{title}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n", qs


def figure(mu, p, title=""):
    return render(compute_range(mu), p, title)


def boundary_csv(rng):
    """Range vertices (counter-clockwise from the origin side) as ``x,y`` rows."""
    V = rng.region.vertices
    if len(V):
        start = int(np.lexsort((V[:, 1], V[:, 0]))[0])
        V = np.roll(V, -start, axis=0)
    buf = io.StringIO()
    buf.write("x,y\n")
    for x, y in V:
        buf.write(f"{x:.17g},{y:.17g}\n")
    return buf.getvalue()
