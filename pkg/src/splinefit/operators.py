"""Discrete operators for the curve-fitting problem.

``SystemMatrix`` maps spline coefficients to curve samples at the integer
parameters ``0 .. M-1``.  ``RegMatrix`` is the circulant matrix of the scaled
finite-difference filter; its rows are the discrete innovation amplitudes of
the fitted curve, so group-thresholding them is what creates knots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bspline import (
    SplineSpace,
    finite_diff_filter,
    periodized_profile,
    sampled_basis_sequence,
)
from .errors import ConfigurationError, UsageError


@dataclass(frozen=True)
class SystemMatrix:
    """Dense sampling operator with entries ``phi((m - n*h))`` for row m, col n."""

    space: SplineSpace
    entries: np.ndarray

    def matvec(self, coeffs: np.ndarray) -> np.ndarray:
        return self.entries @ coeffs

    def rmatvec(self, values: np.ndarray) -> np.ndarray:
        return self.entries.T @ values


@dataclass(frozen=True)
class RegMatrix:
    """Circulant regularization operator, ``entries[m, n] = d[(m - n) % N] / h**alpha``."""

    space: SplineSpace
    entries: np.ndarray

    def matvec(self, coeffs: np.ndarray) -> np.ndarray:
        return self.entries @ coeffs

    def rmatvec(self, values: np.ndarray) -> np.ndarray:
        return self.entries.T @ values


def build_system_matrix(space: SplineSpace) -> SystemMatrix:
    """Sample every basis function at the integer parameters of one period."""
    m_grid = np.arange(space.period, dtype=float)[:, None]
    n_grid = np.arange(space.num_coeffs, dtype=float)[None, :]
    if space.alpha == 0:
        # the half-open box needs exact boundary handling or samples that sit
        # on a cell edge get double-counted; with h = M/N the membership test
        # (m - n h)/h in [-1/2, 1/2) mod N is integer arithmetic after
        # clearing denominators
        big_m, big_n = space.period, space.num_coeffs
        q2 = 2 * (m_grid.astype(int) * big_n - n_grid.astype(int) * big_m)
        entries = (((q2 + big_m) % (2 * big_m * big_n)) < 2 * big_m).astype(float)
    else:
        entries = periodized_profile(space, m_grid - n_grid * space.step)
    return SystemMatrix(space=space, entries=np.asarray(entries))


def build_reg_matrix(space: SplineSpace) -> RegMatrix:
    """Circulant matrix of the degree-matched difference filter, scaled by ``1/h**alpha``."""
    taps = finite_diff_filter(space.alpha)
    n = space.num_coeffs
    if n < len(taps):
        raise ConfigurationError(
            f"num_coeffs={n} shorter than the degree-{space.alpha} filter; "
            "the filter would wrap onto itself"
        )
    first_col = np.zeros(n)
    first_col[: len(taps)] = taps
    entries = scipy.linalg.circulant(first_col) / space.step**space.alpha
    return RegMatrix(space=space, entries=entries)


def _norm_args(f1, f2) -> tuple[np.ndarray, np.ndarray]:
    a1 = np.asarray(f1, dtype=float)
    a2 = np.asarray(f2, dtype=float)
    if a1.ndim != 1 or a2.ndim != 1 or a1.shape != a2.shape:
        raise UsageError(
            f"norm arguments must be 1-d sequences of equal length, got shapes "
            f"{a1.shape} and {a2.shape}"
        )
    return a1, a2


def group_l1l2_norm(f1, f2) -> float:
    """Sum over positions of the euclidean norm of the (f1[n], f2[n]) pairs."""
    a1, a2 = _norm_args(f1, f2)
    return float(np.sum(np.hypot(a1, a2)))


def separable_l1_norm(f1, f2) -> float:
    """Plain l1 norm of both component sequences."""
    a1, a2 = _norm_args(f1, f2)
    return float(np.sum(np.abs(a1)) + np.sum(np.abs(a2)))


def rotate_points(points: np.ndarray, theta: float) -> np.ndarray:
    """Rotate an (M, 2) point set by ``theta`` radians about the origin."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise UsageError(f"expected an (M, 2) point array, got shape {pts.shape}")
    c, s = np.cos(theta), np.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    return pts @ rot.T


def build_constraint_rows(space: SplineSpace) -> tuple[np.ndarray, np.ndarray]:
    """Rows enforcing that the block's curve passes through the origin at t = 0.

    The curve value at 0 is ``sum_k c[k] * b[(-k) % N]`` where ``b`` is the
    sampled basis sequence, so the same row applies to the x and y coefficients.
    """
    b = sampled_basis_sequence(space)
    n = space.num_coeffs
    row = b[(-np.arange(n)) % n]
    return row, row.copy()
