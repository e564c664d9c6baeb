"""Centered polynomial B-splines, their periodizations, and difference filters.

The four supported degrees use the classical centered B-spline profiles.  A
degree-``alpha`` profile is supported on ``[-(alpha+1)/2, (alpha+1)/2]`` and is
piecewise polynomial with breakpoints on the half-integer or integer grid
``t_k = k - (alpha+1)/2``.  The degree-0 box is half-open: it takes the value 1
on ``[-1/2, 1/2)`` and 0 at ``t = +1/2``, so that integer translates tile the
line without double counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, UsageError

SUPPORTED_DEGREES = (0, 1, 2, 3)

# One finite-difference filter per degree; taps are exact integers.
_FILTERS = {
    0: (1, -1),
    1: (1, -2, 1),
    2: (1, -3, 3, -1),
    3: (1, -4, 6, -4, 1),
}


def _check_degree(alpha: int) -> None:
    if alpha not in SUPPORTED_DEGREES:
        raise ConfigurationError(
            f"unsupported spline degree {alpha!r}; supported degrees are {SUPPORTED_DEGREES}"
        )


def _profile(alpha: int, t: np.ndarray) -> np.ndarray:
    a = np.abs(t)
    if alpha == 0:
        return np.where((t >= -0.5) & (t < 0.5), 1.0, 0.0)
    if alpha == 1:
        return np.maximum(0.0, 1.0 - a)
    if alpha == 2:
        inner = 0.75 - a * a
        outer = 0.5 * (1.5 - a) ** 2
        return np.where(a < 0.5, inner, np.where(a < 1.5, outer, 0.0))
    inner = 2.0 / 3.0 - a * a + 0.5 * a**3
    outer = (2.0 - a) ** 3 / 6.0
    return np.where(a < 1.0, inner, np.where(a < 2.0, outer, 0.0))


def eval_bspline(alpha: int, t):
    """Evaluate the centered degree-``alpha`` B-spline at ``t`` (scalar or array)."""
    _check_degree(alpha)
    arr = np.asarray(t, dtype=float)
    out = _profile(alpha, arr)
    if arr.ndim == 0:
        return float(out)
    return out


def finite_diff_filter(alpha: int) -> tuple[int, ...]:
    """Return the ``alpha + 2`` alternating binomial taps for degree ``alpha``."""
    _check_degree(alpha)
    return _FILTERS[alpha]


@dataclass(frozen=True)
class SplineSpace:
    """Periodic spline space: degree, period ``M``, and coefficient count ``N``.

    The basis consists of ``N`` translates, spaced ``h = M / N`` apart, of the
    ``M``-periodized dilated profile.
    """

    alpha: int
    period: int
    num_coeffs: int

    def __post_init__(self) -> None:
        _check_degree(self.alpha)
        if not isinstance(self.period, (int, np.integer)) or self.period < 1:
            raise ConfigurationError(f"period must be a positive integer, got {self.period!r}")
        if not isinstance(self.num_coeffs, (int, np.integer)) or self.num_coeffs < 1:
            raise ConfigurationError(
                f"num_coeffs must be a positive integer, got {self.num_coeffs!r}"
            )
        if self.num_coeffs < self.alpha + 1:
            raise ConfigurationError(
                f"num_coeffs={self.num_coeffs} too small for degree {self.alpha}; "
                "one basis function must fit inside one period"
            )

    @property
    def step(self) -> float:
        """Knot-grid spacing ``h = M / N``."""
        return self.period / self.num_coeffs


def periodized_profile(space: SplineSpace, t) -> np.ndarray | float:
    """Evaluate the ``M``-periodized, ``h``-dilated profile at ``t``.

    This is the sum of ``eval_bspline(alpha, (t - M*k) / h)`` over all integers
    ``k``; only the handful of terms whose support covers ``t`` contribute.
    """
    arr = np.asarray(t, dtype=float)
    h = space.step
    half_support = 0.5 * (space.alpha + 1) * h
    mperiod = float(space.period)
    lo = math.floor((float(arr.min()) - half_support) / mperiod) if arr.size else 0
    hi = math.ceil((float(arr.max()) + half_support) / mperiod) if arr.size else -1
    out = np.zeros_like(arr)
    for k in range(lo, hi + 1):
        out += _profile(space.alpha, (arr - mperiod * k) / h)
    if arr.ndim == 0:
        return float(out)
    return out


def eval_periodized_basis(space: SplineSpace, n: int, t):
    """Evaluate basis function ``n`` (the translate by ``n*h``) at ``t``."""
    if not 0 <= n < space.num_coeffs:
        raise UsageError(f"basis index {n} out of range [0, {space.num_coeffs})")
    arr = np.asarray(t, dtype=float)
    return periodized_profile(space, arr - n * space.step)


def sampled_basis_sequence(space: SplineSpace) -> np.ndarray:
    """Basis function 0 sampled on its own grid: ``b[k] = phi(k*h)`` for ``k < N``."""
    return np.asarray(
        periodized_profile(space, space.step * np.arange(space.num_coeffs))
    )
