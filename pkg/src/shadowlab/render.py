"""Deterministic SVG output: iterated bodies, blind curves, coverage plots.

All documents use a fixed 1000x1000 viewBox mapping the content bounding box
with a 5% margin; colors come from a fixed 8-color palette keyed by connected
component.  Coordinates are written with fixed precision so repeated runs
produce identical bytes.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from .convex import ConvexPointSet, hull_vertices_2d
from .errors import DegenerateInput, DimensionMismatch
from .ifs import IteratedFunctionSystem, component_decomposition, iterate_bodies
from .scalars import FLOAT, to_float

VIEW = 1000.0
MARGIN = 0.05

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f",
)


def _fmt(v: float) -> str:
    return f"{v:.4f}"


class _View:
    """World-to-view transform with a 5% margin and y pointing up."""

    def __init__(self, xs, ys):
        lo_x, hi_x = min(xs), max(xs)
        lo_y, hi_y = min(ys), max(ys)
        span = max(hi_x - lo_x, hi_y - lo_y, 1e-12)
        pad = MARGIN * span
        self.x0 = lo_x - pad
        self.y0 = lo_y - pad
        self.scale = VIEW / (span + 2 * pad)

    def __call__(self, p):
        x = (to_float(p[0]) - self.x0) * self.scale
        y = VIEW - (to_float(p[1]) - self.y0) * self.scale
        return x, y


def _svg(elements: Sequence[str]) -> str:
    head = (
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {VIEW:.0f} {VIEW:.0f}">'
    )
    return "\n".join([head, *elements, "</svg>"]) + "\n"


def _project_points(points, axis: int):
    return [tuple(to_float(c) for i, c in enumerate(p) if i != axis) for p in points]


def render_ifs_svg(
    ifs: IteratedFunctionSystem,
    level: int = 1,
    style: str = "components",
    project_axis: int = 2,
    witness: Optional[tuple] = None,
    points: Optional[Sequence] = None,
) -> str:
    """Level-k images as polygons; optional witness line and point overlay.

    dim 2 renders directly; dim 3 orthographically along ``project_axis``;
    higher dimensions are unsupported.
    """
    if ifs.dim > 3:
        raise DimensionMismatch("rendering supports dim <= 3 only")
    bodies = iterate_bodies(ifs, level)
    if ifs.dim == 3:
        flat = [_project_points(b.points, project_axis) for b in bodies]
        bodies2 = [ConvexPointSet(2, tuple(pts)) for pts in flat]
        seed_pts = _project_points(ifs.seed.points, project_axis)
    else:
        bodies2 = bodies
        seed_pts = [tuple(map(to_float, p)) for p in ifs.seed.points]

    if style == "components":
        decomp = component_decomposition(bodies2, FLOAT, level=level)
        color_of = {}
        for part_idx, part in enumerate(decomp.parts):
            for b_idx in part:
                color_of[b_idx] = PALETTE[part_idx % len(PALETTE)]
    else:
        color_of = {i: PALETTE[i % len(PALETTE)] for i in range(len(bodies2))}

    view = _View([p[0] for p in seed_pts], [p[1] for p in seed_pts])
    elements = [f'<rect width="{VIEW:.0f}" height="{VIEW:.0f}" fill="#ffffff"/>']
    for i, b in enumerate(bodies2):
        hull = hull_vertices_2d(b, FLOAT)
        pts = " ".join(",".join(map(_fmt, view(p))) for p in hull)
        elements.append(
            f'<g id="body{i}"><polygon points="{pts}" fill="{color_of[i]}" '
            'fill-opacity="0.75" stroke="#222222" stroke-width="0.8"/></g>'
        )
    if witness is not None:
        seg = _clip_line(witness, seed_pts)
        if seg is not None:
            (x1, y1), (x2, y2) = view(seg[0]), view(seg[1])
            elements.append(
                f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                'stroke="#000000" stroke-width="3" stroke-dasharray="12,6"/>'
            )
    if points is not None:
        for p in points:
            x, y = view(p)
            elements.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="1.2" fill="#111111"/>')
    return _svg(elements)


def _clip_line(witness, seed_pts):
    """Intersect the line <n,x> = c with the seed bounding box (2-D floats)."""
    normal, offset = witness
    n = [to_float(c) for c in normal[:2]]
    c = to_float(offset)
    lo = [min(p[i] for p in seed_pts) for i in range(2)]
    hi = [max(p[i] for p in seed_pts) for i in range(2)]
    cands = []
    for axis in range(2):
        other = 1 - axis
        if abs(n[other]) < 1e-15:
            continue
        for bound in (lo[axis], hi[axis]):
            val = (c - n[axis] * bound) / n[other]
            if lo[other] - 1e-9 <= val <= hi[other] + 1e-9:
                pt = [0.0, 0.0]
                pt[axis] = bound
                pt[other] = val
                cands.append(tuple(pt))
    if len(cands) < 2:
        return None
    cands.sort()
    return cands[0], cands[-1]


def render_segments_svg(segments, bold: bool = True) -> str:
    """Blind curves as stroked paths (exactly the Gamma_n figures)."""
    if not segments:
        raise DegenerateInput("no segments to render")
    xs = [to_float(c) for s in segments for c in (s.a[0], s.b[0])]
    ys = [to_float(c) for s in segments for c in (s.a[1], s.b[1])]
    view = _View(xs, ys)
    width = "2.5" if bold else "1"
    elements = [f'<rect width="{VIEW:.0f}" height="{VIEW:.0f}" fill="#ffffff"/>']
    for i, s in enumerate(segments):
        (x1, y1), (x2, y2) = view(s.a), view(s.b)
        elements.append(
            f'<path id="seg{i}" d="M {_fmt(x1)} {_fmt(y1)} L {_fmt(x2)} {_fmt(y2)}" '
            f'stroke="#4b1f97" stroke-width="{width}" fill="none" stroke-linecap="round"/>'
        )
    return _svg(elements)


def coverage_plot_svg(directions, gaps) -> str:
    """Polyline of gap(theta) over [0, pi) with the zero line emphasized."""
    if len(directions) < 2:
        raise DegenerateInput("coverage plot needs at least two directions")
    if any(len(u) != 2 for u in directions):
        raise DimensionMismatch("coverage plot is 2-D only")
    thetas = [math.atan2(u[1], u[0]) % math.pi for u in directions]
    order = sorted(range(len(thetas)), key=lambda i: (thetas[i], i))
    peak = max(max(gaps), 1e-9)
    pad = VIEW * MARGIN
    span_x = VIEW - 2 * pad
    span_y = VIEW - 2 * pad

    def xy(i):
        x = pad + span_x * thetas[i] / math.pi
        y = VIEW - pad - span_y * (gaps[i] / peak)
        return x, y

    pts = " ".join(",".join(map(_fmt, xy(i))) for i in order)
    zero_y = _fmt(VIEW - pad)
    elements = [
        f'<rect width="{VIEW:.0f}" height="{VIEW:.0f}" fill="#ffffff"/>',
        f'<line x1="{_fmt(pad)}" y1="{zero_y}" x2="{_fmt(VIEW - pad)}" y2="{zero_y}" '
        'stroke="#000000" stroke-width="2.5"/>',
        f'<polyline points="{pts}" fill="none" stroke="#d62728" stroke-width="1.5"/>',
    ]
    return _svg(elements)
