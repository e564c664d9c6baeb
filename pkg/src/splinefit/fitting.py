"""High-level fitting: contour validation, curve models, knots, and baselines."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .admm import AdmmConfig, solve_hybrid, solve_single
from .bspline import SplineSpace, periodized_profile
from .errors import UsageError
from .operators import (
    build_constraint_rows,
    build_reg_matrix,
    build_system_matrix,
)

DEFAULT_KNOT_EPS = 1e-4


def as_contour(points) -> np.ndarray:
    """Validate and return contour points as an (M, 2) float array."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise UsageError(f"contour must be an (M, 2) array, got shape {arr.shape}")
    if arr.shape[0] < 3:
        raise UsageError(f"contour needs at least 3 points, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise UsageError("contour contains non-finite coordinates")
    return arr


@dataclass(frozen=True)
class SplineBlock:
    """One coefficient block: a spline space plus its (N, 2) coefficient array."""

    space: SplineSpace
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.coeffs, dtype=float)
        if arr.shape != (self.space.num_coeffs, 2):
            raise UsageError(
                f"coefficients must have shape ({self.space.num_coeffs}, 2), got {arr.shape}"
            )
        object.__setattr__(self, "coeffs", arr)


@dataclass(frozen=True)
class CurveModel:
    """A closed parametric curve: the sum of one or two spline blocks."""

    blocks: tuple[SplineBlock, ...]

    def __post_init__(self) -> None:
        blocks = tuple(self.blocks)
        if len(blocks) not in (1, 2):
            raise UsageError(f"model needs 1 or 2 blocks, got {len(blocks)}")
        if len(blocks) == 2:
            s1, s2 = blocks[0].space, blocks[1].space
            if s1.period != s2.period or s1.num_coeffs != s2.num_coeffs:
                raise UsageError("hybrid blocks must share period and coefficient count")
            if s1.alpha >= s2.alpha:
                raise UsageError("hybrid blocks must have strictly increasing degrees")
        object.__setattr__(self, "blocks", blocks)

    @property
    def kind(self) -> str:
        return "single" if len(self.blocks) == 1 else "hybrid"

    @property
    def period(self) -> int:
        return self.blocks[0].space.period


@dataclass(frozen=True)
class Knot:
    """Location on the parameter circle plus the jump amplitude pair."""

    t: float
    ax: float
    ay: float
    block: int


@dataclass(frozen=True)
class FitReport:
    qfe: float
    knots: tuple[Knot, ...]
    K: int
    objective: float
    iterations: int
    converged: bool
    residuals: tuple[float, float]
    knot_eps: float

    def knots_in_block(self, block: int) -> tuple[Knot, ...]:
        return tuple(k for k in self.knots if k.block == block)


def evaluate_curve(model: CurveModel, t) -> np.ndarray:
    """Evaluate the model at parameter values ``t``; returns (len(t), 2)."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros((ts.size, 2))
    for block in model.blocks:
        space = block.space
        h = space.step
        n_grid = np.arange(space.num_coeffs, dtype=float)
        basis = periodized_profile(space, ts[:, None] - n_grid[None, :] * h)
        out += basis @ block.coeffs
    return out


def sample_curve(model: CurveModel, samples_per_unit: int = 20) -> np.ndarray:
    """Uniformly sample one period; returns rows of (t, x, y)."""
    if samples_per_unit < 1:
        raise UsageError(f"samples_per_unit must be >= 1, got {samples_per_unit}")
    count = model.period * samples_per_unit
    ts = np.arange(count, dtype=float) / samples_per_unit
    xy = evaluate_curve(model, ts)
    return np.column_stack([ts, xy])


def qfe(model: CurveModel, points) -> float:
    """Quadratic fitting error: mean squared distance at the integer parameters."""
    pts = as_contour(points)
    if pts.shape[0] != model.period:
        raise UsageError(
            f"model period {model.period} does not match point count {pts.shape[0]}"
        )
    xy = evaluate_curve(model, np.arange(model.period, dtype=float))
    return float(np.mean(np.sum((xy - pts) ** 2, axis=1)))


def extract_knots(model: CurveModel, knot_eps: float = DEFAULT_KNOT_EPS) -> tuple[Knot, ...]:
    """Rows of L c with norm above ``knot_eps`` times the largest row norm.

    The threshold is relative to the largest row norm across all blocks, so a
    block whose innovations collapsed to zero reports no knots.  A constant
    curve has rows that are zero only up to roundoff, so row norms below
    roundoff scale count as no knots at all.  Locations are mapped to the
    parameter circle via the half-support grid offset.
    """
    if knot_eps < 0:
        raise UsageError(f"knot_eps must be nonnegative, got {knot_eps!r}")
    per_block = []
    max_norm = 0.0
    floor = 0.0
    for block in model.blocks:
        reg = build_reg_matrix(block.space)
        rows = reg.entries @ block.coeffs
        norms = np.linalg.norm(rows, axis=1)
        per_block.append((block, rows, norms))
        if norms.size:
            max_norm = max(max_norm, float(norms.max()))
        row_scale = float(np.abs(reg.entries[0]).sum())
        coeff_scale = float(np.abs(block.coeffs).max()) if block.coeffs.size else 0.0
        floor = max(floor, 1e-12 * row_scale * coeff_scale)
    if max_norm <= floor:
        return ()
    threshold = knot_eps * max_norm
    knots: list[Knot] = []
    for index, (block, rows, norms) in enumerate(per_block, start=1):
        space = block.space
        h = space.step
        offset = 0.5 * (space.alpha + 1)
        found = [
            Knot(
                t=float(((n - offset) * h) % space.period),
                ax=float(rows[n, 0]),
                ay=float(rows[n, 1]),
                block=index,
            )
            for n in range(space.num_coeffs)
            if norms[n] > threshold
        ]
        found.sort(key=lambda k: k.t)
        knots.extend(found)
    return tuple(knots)


def _report_from(model: CurveModel, points: np.ndarray, result, knot_eps: float) -> FitReport:
    knots = extract_knots(model, knot_eps)
    return FitReport(
        qfe=qfe(model, points),
        knots=knots,
        K=len(knots),
        objective=result.objective,
        iterations=result.iterations,
        converged=result.converged,
        residuals=result.residuals,
        knot_eps=knot_eps,
    )


def fit_single(
    points,
    alpha: int,
    lam: float,
    num_coeffs: int | None = None,
    regularizer: str = "group",
    admm: AdmmConfig | None = None,
    knot_eps: float = DEFAULT_KNOT_EPS,
) -> tuple[CurveModel, FitReport]:
    """Fit one closed spline of degree ``alpha`` to ordered contour points."""
    pts = as_contour(points)
    m = pts.shape[0]
    space = SplineSpace(alpha=alpha, period=m, num_coeffs=num_coeffs or m)
    H = build_system_matrix(space)
    L = build_reg_matrix(space)
    cfg = replace(admm or AdmmConfig(), regularizer=regularizer)
    result = solve_single(H, L, pts[:, 0], pts[:, 1], lam, cfg)
    model = CurveModel(blocks=(SplineBlock(space=space, coeffs=result.blocks[0]),))
    return model, _report_from(model, pts, result, knot_eps)


def fit_hybrid(
    points,
    alpha1: int,
    alpha2: int,
    lam1: float,
    lam2: float,
    num_coeffs: int | None = None,
    regularizer: str = "group",
    admm: AdmmConfig | None = None,
    knot_eps: float = DEFAULT_KNOT_EPS,
) -> tuple[CurveModel, FitReport]:
    """Fit the sum of two spline blocks of degrees ``alpha1 < alpha2``."""
    pts = as_contour(points)
    if alpha1 >= alpha2:
        raise UsageError(
            f"hybrid degrees must satisfy alpha1 < alpha2, got {alpha1} and {alpha2}"
        )
    m = pts.shape[0]
    n = num_coeffs or m
    space1 = SplineSpace(alpha=alpha1, period=m, num_coeffs=n)
    space2 = SplineSpace(alpha=alpha2, period=m, num_coeffs=n)
    cfg = replace(admm or AdmmConfig(), regularizer=regularizer)
    result = solve_hybrid(
        build_system_matrix(space1),
        build_system_matrix(space2),
        build_reg_matrix(space1),
        build_reg_matrix(space2),
        build_constraint_rows(space1),
        pts[:, 0],
        pts[:, 1],
        lam1,
        lam2,
        cfg,
    )
    model = CurveModel(
        blocks=(
            SplineBlock(space=space1, coeffs=result.blocks[0]),
            SplineBlock(space=space2, coeffs=result.blocks[1]),
        )
    )
    return model, _report_from(model, pts, result, knot_eps)


def add_noise(points, snr_db: float, seed: int) -> np.ndarray:
    """Add white Gaussian noise at the given SNR (dB, relative to the centered power).

    ``snr_db = inf`` is the no-noise sentinel and returns a copy.  The draw is a
    deterministic function of ``seed``.
    """
    pts = as_contour(points)
    if math.isinf(snr_db) and snr_db > 0:
        return pts.copy()
    if not math.isfinite(snr_db):
        raise UsageError(f"snr_db must be finite or +inf, got {snr_db!r}")
    centered = pts - pts.mean(axis=0)
    signal_power = float(np.mean(np.sum(centered**2, axis=1)))
    noise_power = signal_power * 10.0 ** (-snr_db / 10.0)
    sigma = math.sqrt(noise_power / 2.0)
    rng = np.random.default_rng(seed)
    return pts + rng.normal(0.0, sigma, pts.shape) if sigma > 0 else pts.copy()


def _ls_fit_dense(Hd: np.ndarray, pts: np.ndarray) -> np.ndarray:
    sol, *_ = np.linalg.lstsq(Hd, pts, rcond=None)
    return sol


def _window_refit(
    Ld: np.ndarray,
    coeffs: np.ndarray,
    zeroed: list[int],
    new_row: int,
    alpha: int,
) -> np.ndarray:
    """Zero row ``new_row`` of L c by a minimal local coefficient perturbation.

    Only coefficients in the row's support move, previously zeroed rows that
    touch the window are kept zero via equality constraints, and the window
    grows until those constraints are consistent.  The perturbation is the
    least-norm one, so each removal approximates the current curve rather than
    re-fitting the data, as classical knot-removal pipelines do.
    """
    n = Ld.shape[0]
    taps = alpha + 2
    window = {(new_row - k) % n for k in range(taps)}
    active = sorted(set(zeroed) | {new_row})
    while True:
        win = sorted(window)
        touching = [
            r for r in active if any(((r - k) % n) in window for k in range(taps))
        ]
        B = Ld[np.ix_(touching, win)]
        b = -(Ld[touching] @ coeffs)
        delta, *_ = np.linalg.lstsq(B, b, rcond=None)
        if np.linalg.norm(B @ delta - b) <= 1e-9 * (1.0 + np.linalg.norm(b)):
            out = coeffs.copy()
            out[win] += delta
            return out
        if len(window) == n:
            raise AssertionError("full-window constraint system should be consistent")
        grown = set(window)
        for idx in win:
            for step in range(1, taps):
                grown.add((idx + step) % n)
                grown.add((idx - step) % n)
        window = grown


def knot_removal_baseline(
    points,
    alpha: int,
    target_K: int,
    knot_eps: float = DEFAULT_KNOT_EPS,
) -> tuple[CurveModel, FitReport]:
    """Greedy sparsification anchor: dense least squares, then repeated local zeroing.

    Starting from the dense fit with as many coefficients as points, the row of
    L c with the smallest group norm is zeroed by a minimal local perturbation,
    repeating until ``target_K`` candidate knots remain.  The data are never
    re-consulted after the initial fit, mirroring classical knot-removal
    pipelines.  ``target_K = 0`` removes every candidate, which forces a
    constant curve; that one is fitted directly (the centroid).
    """
    pts = as_contour(points)
    m = pts.shape[0]
    space = SplineSpace(alpha=alpha, period=m, num_coeffs=m)
    if not 0 <= target_K <= m:
        raise UsageError(f"target_K must lie in [0, {m}], got {target_K}")
    Hd = build_system_matrix(space).entries
    Ld = build_reg_matrix(space).entries
    coeffs = _ls_fit_dense(Hd, pts)

    zeroed: list[int] = []
    active = list(range(m))
    if target_K == 0:
        coeffs = np.tile(pts.mean(axis=0), (m, 1))
        zeroed, active = active, zeroed
    while len(active) > target_K:
        norms = np.linalg.norm(Ld @ coeffs, axis=1)
        pick = min(active, key=lambda r: (norms[r], r))
        coeffs = _window_refit(Ld, coeffs, zeroed, pick, alpha)
        zeroed.append(pick)
        active.remove(pick)

    model = CurveModel(blocks=(SplineBlock(space=space, coeffs=coeffs),))
    knots = extract_knots(model, knot_eps)
    data_error = float(np.sum((Hd @ coeffs - pts) ** 2))
    report = FitReport(
        qfe=qfe(model, pts),
        knots=knots,
        K=len(knots),
        objective=data_error,
        iterations=len(zeroed),
        converged=True,
        residuals=(0.0, 0.0),
        knot_eps=knot_eps,
    )
    return model, report


def rotate_about_centroid(points, theta: float) -> np.ndarray:
    """Rotate points about their centroid; exact identity at ``theta = 0``."""
    from .operators import rotate_points

    pts = as_contour(points)
    centered = pts - pts.mean(axis=0)
    return pts + (rotate_points(centered, theta) - centered)
