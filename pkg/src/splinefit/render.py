"""Self-contained SVG rendering of fitted curve models.

Marker conventions: circles mark block-1 knots, triangles block-2 knots, and a
diamond replaces the pair when knots from the two blocks coincide to within
half a grid step.  The y axis is flipped inside the document so the drawing
matches the usual mathematical orientation.
"""

from __future__ import annotations

import numpy as np

from .errors import UsageError
from .fitting import CurveModel, evaluate_curve, extract_knots, sample_curve

_FMT = "{:.12g}"


def _fmt(value: float) -> str:
    return _FMT.format(float(value))


def _marker(shape: str, x: float, y: float, size: float) -> str:
    if shape == "circle":
        return (
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(size)}" '
            f'fill="none" stroke="#d62728" stroke-width="{_fmt(size / 3)}"/>'
        )
    if shape == "triangle":
        pts = [(x, y + size), (x - size, y - size), (x + size, y - size)]
    else:
        pts = [(x, y + size), (x + size, y), (x, y - size), (x - size, y)]
    joined = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in pts)
    color = "#1f77b4" if shape == "triangle" else "#2ca02c"
    return (
        f'<polygon points="{joined}" fill="none" stroke="{color}" '
        f'stroke-width="{_fmt(size / 3)}"/>'
    )


def _paired_knots(model: CurveModel, knot_eps: float):
    """Split knots into circles, triangles, and coincidence diamonds."""
    knots = extract_knots(model, knot_eps)
    block1 = [k for k in knots if k.block == 1]
    block2 = [k for k in knots if k.block == 2]
    if len(model.blocks) < 2:
        return block1, [], []
    half_step = 0.5 * model.blocks[0].space.step
    period = float(model.period)
    diamonds = []
    unmatched2 = list(block2)
    remaining1 = []
    for knot in block1:
        match = None
        for other in unmatched2:
            dist = abs(knot.t - other.t)
            if min(dist, period - dist) <= half_step:
                match = other
                break
        if match is None:
            remaining1.append(knot)
        else:
            unmatched2.remove(match)
            diamonds.append(knot)
    return remaining1, unmatched2, diamonds


def render_svg(
    model: CurveModel,
    samples_per_unit: int = 20,
    show_knots: bool = False,
    knot_eps: float = 1e-4,
) -> str:
    """Render one period of the model as a standalone SVG document."""
    if samples_per_unit < 1:
        raise UsageError(f"samples_per_unit must be >= 1, got {samples_per_unit}")
    polyline = sample_curve(model, samples_per_unit)[:, 1:]

    circles, triangles, diamonds = ([], [], [])
    if show_knots:
        circles, triangles, diamonds = _paired_knots(model, knot_eps)

    lo = polyline.min(axis=0)
    hi = polyline.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    margin = 0.05 * span
    lo = lo - margin
    hi = hi + margin
    width, height = hi - lo
    size = 0.015 * float(np.hypot(width, height))

    path = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in polyline) + " Z"
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(lo[0])} {_fmt(lo[1])} {_fmt(width)} {_fmt(height)}" '
        f'width="{_fmt(width)}" height="{_fmt(height)}">',
        f'<g transform="matrix(1 0 0 -1 0 {_fmt(lo[1] + hi[1])})">',
        f'<path d="{path}" fill="none" stroke="#000000" stroke-width="{_fmt(size / 4)}"/>',
    ]
    for shape, knots in (("circle", circles), ("triangle", triangles), ("diamond", diamonds)):
        for knot in knots:
            x, y = evaluate_curve(model, np.array([knot.t]))[0]
            parts.append(_marker(shape, x, y, size))
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
