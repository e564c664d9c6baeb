"""Synthetic closed contours used by the tests, the experiment scripts, and demos.

All generators return ordered (M, 2) arrays sampled counterclockwise at uniform
arclength, which matches the integer-parameter convention of the fitters.
"""

from __future__ import annotations

import math

import numpy as np

from .bspline import SplineSpace
from .errors import UsageError
from .operators import build_system_matrix


def _sample_segments(segments, num_points: int, offset: float) -> np.ndarray:
    """Sample ``num_points`` points at uniform arclength along parametric segments.

    ``segments`` is a list of (length, point_at) pairs where ``point_at`` maps a
    local arclength in [0, length] to an (x, y) pair.
    """
    lengths = np.array([seg[0] for seg in segments])
    perimeter = float(lengths.sum())
    if perimeter <= 0:
        raise UsageError("contour has zero perimeter")
    starts = np.concatenate([[0.0], np.cumsum(lengths)])
    pts = np.empty((num_points, 2))
    for j in range(num_points):
        s = (offset + j * perimeter / num_points) % perimeter
        idx = int(np.searchsorted(starts, s, side="right") - 1)
        idx = min(idx, len(segments) - 1)
        pts[j] = segments[idx][1](s - starts[idx])
    return pts


def polygon_contour(vertices, num_points: int, offset: float = 0.0) -> np.ndarray:
    """Closed polygon through ``vertices``, sampled at uniform arclength."""
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2 or verts.shape[1] != 2 or verts.shape[0] < 3:
        raise UsageError("polygon needs at least 3 vertices")
    segments = []
    for a, b in zip(verts, np.roll(verts, -1, axis=0)):
        length = float(np.hypot(*(b - a)))
        if length == 0:
            raise UsageError("polygon has a zero-length edge")

        def point_at(s, a=a, b=b, length=length):
            return a + (s / length) * (b - a)

        segments.append((length, point_at))
    return _sample_segments(segments, num_points, offset)


def square_contour(
    num_points: int = 16, side: float = 4.0, corner_offset: float = 0.0
) -> np.ndarray:
    """Axis-aligned square of the given side, starting at the origin corner."""
    verts = [(0.0, 0.0), (side, 0.0), (side, side), (0.0, side)]
    return polygon_contour(verts, num_points, offset=corner_offset)


def rounded_rectangle_contour(
    num_points: int = 60,
    width: float = 20.0,
    height: float = 12.0,
    radius: float = 3.0,
) -> np.ndarray:
    """Rectangle with quarter-circle corners: straight runs joined by arcs."""
    if radius <= 0 or 2 * radius >= min(width, height):
        raise UsageError("corner radius must be positive and fit the rectangle")
    w, h, r = width, height, radius
    sx, sy = w - 2 * r, h - 2 * r
    arc = 0.5 * math.pi * r

    def line(a, b):
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        length = float(np.hypot(*(b - a)))
        return (length, lambda s, a=a, b=b, length=length: a + (s / length) * (b - a))

    def corner(center, start_angle):
        cx, cy = center
        return (
            arc,
            lambda s, cx=cx, cy=cy, start_angle=start_angle: np.array(
                [
                    cx + r * math.cos(start_angle + s / r),
                    cy + r * math.sin(start_angle + s / r),
                ]
            ),
        )

    segments = [
        line((r, 0), (w - r, 0)),
        corner((w - r, r), -0.5 * math.pi),
        line((w, r), (w, h - r)),
        corner((w - r, h - r), 0.0),
        line((w - r, h), (r, h)),
        corner((r, h - r), 0.5 * math.pi),
        line((0, h - r), (0, r)),
        corner((r, r), math.pi),
    ]
    return _sample_segments(segments, num_points, offset=0.0)


def spline_contour(
    alpha: int,
    num_points: int,
    num_coeffs: int | None = None,
    seed: int = 0,
    radius: float = 10.0,
    wobble: float = 1.5,
) -> np.ndarray:
    """Points lying exactly on a random closed spline of the requested space."""
    n = num_coeffs or num_points
    space = SplineSpace(alpha=alpha, period=num_points, num_coeffs=n)
    rng = np.random.default_rng(seed)
    angles = 2.0 * math.pi * np.arange(n) / n
    coeffs = np.column_stack([radius * np.cos(angles), radius * np.sin(angles)])
    coeffs += wobble * rng.standard_normal((n, 2))
    return build_system_matrix(space).entries @ coeffs
