"""ADMM solvers for the regularized curve-fitting problems.

Both solvers minimize a sum-of-squares data term plus one sparsity term per
coefficient block,

    ||H c_x - p_x||^2 + ||H c_y - p_y||^2 + lambda * R(L c_x, L c_y),

with R either the group l1-l2 norm (rotation invariant) or the separable l1
norm.  The split variable is w = L c; scaling the objective by 1/2 puts the
c-update in the standard form

    (H^T H + rho L^T L) c = H^T p + rho L^T (z - u)

with one Cholesky factorization reused across iterations, and makes the
z-update a soft threshold with kappa = lambda / (2 rho).  Stopping follows the
usual primal/dual residual test.  All iterates start at zero, so a solve is a
pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConfigurationError, NumericalError, UsageError
from .operators import RegMatrix, SystemMatrix, group_l1l2_norm, separable_l1_norm

REGULARIZERS = ("group", "separable")

# Relative diagonal lift used when a factorization reports a singular system.
_LIFT_EPS = 1e-10


@dataclass(frozen=True)
class AdmmConfig:
    """Solver settings; the defaults suit contours with a few hundred points."""

    rho: float = 1.0
    max_iters: int = 10_000
    tol_abs: float = 1e-6
    tol_rel: float = 1e-4
    regularizer: str = "group"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise ConfigurationError(f"rho must be positive and finite, got {self.rho!r}")
        if self.max_iters < 1:
            raise ConfigurationError(f"max_iters must be >= 1, got {self.max_iters!r}")
        if self.tol_abs < 0 or self.tol_rel < 0:
            raise ConfigurationError("tolerances must be nonnegative")
        if self.regularizer not in REGULARIZERS:
            raise ConfigurationError(
                f"unknown regularizer {self.regularizer!r}; expected one of {REGULARIZERS}"
            )


@dataclass(frozen=True)
class SolveResult:
    """Coefficient blocks plus the recomputed objective and convergence facts."""

    blocks: tuple[np.ndarray, ...]
    objective: float
    iterations: int
    converged: bool
    residuals: tuple[float, float]


def group_soft_threshold(rows: np.ndarray, kappa: float) -> np.ndarray:
    """Shrink each row of an (N, 2) array toward zero by ``kappa`` in euclidean norm."""
    if kappa < 0:
        raise UsageError(f"threshold must be nonnegative, got {kappa!r}")
    arr = np.asarray(rows, dtype=float)
    norms = np.linalg.norm(arr, axis=-1, keepdims=True)
    scale = np.maximum(0.0, 1.0 - kappa / np.where(norms > 0, norms, 1.0))
    scale[norms == 0] = 0.0
    return arr * scale


def elementwise_soft_threshold(values: np.ndarray, kappa: float) -> np.ndarray:
    """Classical scalar soft threshold applied entrywise."""
    if kappa < 0:
        raise UsageError(f"threshold must be nonnegative, got {kappa!r}")
    arr = np.asarray(values, dtype=float)
    return np.sign(arr) * np.maximum(np.abs(arr) - kappa, 0.0)


def _prox(regularizer: str):
    if regularizer == "group":
        return group_soft_threshold
    return elementwise_soft_threshold


def _reg_value(rows: np.ndarray, regularizer: str) -> float:
    if regularizer == "group":
        return group_l1l2_norm(rows[:, 0], rows[:, 1])
    return separable_l1_norm(rows[:, 0], rows[:, 1])


def _stack_points(px, py) -> np.ndarray:
    px = np.asarray(px, dtype=float)
    py = np.asarray(py, dtype=float)
    if px.ndim != 1 or py.ndim != 1 or px.shape != py.shape:
        raise UsageError("px and py must be 1-d arrays of equal length")
    pts = np.column_stack([px, py])
    if not np.all(np.isfinite(pts)):
        raise UsageError("data points contain non-finite values")
    return pts


def _check_lambda(lam: float, name: str = "lambda") -> float:
    lam = float(lam)
    if not math.isfinite(lam) or lam <= 0:
        raise UsageError(f"{name} must be positive and finite, got {lam!r}")
    return lam


def _cho_factor_with_lift(G: np.ndarray):
    try:
        return scipy.linalg.cho_factor(G, lower=True)
    except scipy.linalg.LinAlgError:
        lift = _LIFT_EPS * np.trace(G) / G.shape[0]
        try:
            return scipy.linalg.cho_factor(G + lift * np.eye(G.shape[0]), lower=True)
        except scipy.linalg.LinAlgError as exc:
            raise NumericalError("normal-equation system is singular even after lift") from exc


def _lu_factor_with_lift(K: np.ndarray, nvars: int):
    def attempt(mat):
        lu, piv = scipy.linalg.lu_factor(mat)
        if not np.all(np.isfinite(lu)):
            raise scipy.linalg.LinAlgError("non-finite factor")
        return lu, piv

    try:
        return attempt(K)
    except (scipy.linalg.LinAlgError, ValueError):
        lifted = K.copy()
        lift = _LIFT_EPS * np.trace(K[:nvars, :nvars]) / nvars
        lifted[np.arange(nvars), np.arange(nvars)] += lift
        try:
            return attempt(lifted)
        except (scipy.linalg.LinAlgError, ValueError) as exc:
            raise NumericalError("constrained system is singular even after lift") from exc


def solve_single(
    H: SystemMatrix,
    L: RegMatrix,
    px,
    py,
    lam: float,
    config: AdmmConfig | None = None,
) -> SolveResult:
    """Fit one coefficient block; returns the minimizer of the single-block objective."""
    cfg = config or AdmmConfig()
    lam = _check_lambda(lam)
    P = _stack_points(px, py)
    Hd = H.entries
    Ld = L.entries
    if Hd.shape[0] != P.shape[0]:
        raise UsageError(
            f"system matrix has {Hd.shape[0]} rows but {P.shape[0]} points were given"
        )
    if Hd.shape[1] != Ld.shape[1]:
        raise UsageError("system and regularization matrices disagree on coefficient count")

    rho = cfg.rho
    kappa = lam / (2.0 * rho)
    prox = _prox(cfg.regularizer)

    G = Hd.T @ Hd + rho * (Ld.T @ Ld)
    factor = _cho_factor_with_lift(G)
    HtP = Hd.T @ P
    LdT = Ld.T

    n = Hd.shape[1]
    C = np.zeros((n, 2))
    Z = np.zeros((n, 2))
    U = np.zeros((n, 2))
    sqrt_size = math.sqrt(Z.size)

    converged = False
    iterations = 0
    r_pri = r_dua = math.inf
    for iterations in range(1, cfg.max_iters + 1):
        C = scipy.linalg.cho_solve(factor, HtP + rho * (LdT @ (Z - U)))
        W = Ld @ C
        Z_old = Z
        Z = prox(W + U, kappa)
        U = U + W - Z

        r_pri = float(np.linalg.norm(W - Z))
        r_dua = float(rho * np.linalg.norm(LdT @ (Z - Z_old)))
        eps_pri = sqrt_size * cfg.tol_abs + cfg.tol_rel * max(
            np.linalg.norm(W), np.linalg.norm(Z)
        )
        eps_dua = sqrt_size * cfg.tol_abs + cfg.tol_rel * rho * np.linalg.norm(LdT @ U)
        if r_pri <= eps_pri and r_dua <= eps_dua:
            converged = True
            break

    objective = float(np.sum((Hd @ C - P) ** 2)) + lam * _reg_value(Ld @ C, cfg.regularizer)
    return SolveResult(
        blocks=(C,),
        objective=objective,
        iterations=iterations,
        converged=converged,
        residuals=(r_pri, r_dua),
    )


def solve_hybrid(
    H1: SystemMatrix,
    H2: SystemMatrix,
    L1: RegMatrix,
    L2: RegMatrix,
    constraint_rows: tuple[np.ndarray, np.ndarray],
    px,
    py,
    lam1: float,
    lam2: float,
    config: AdmmConfig | None = None,
) -> SolveResult:
    """Fit two coefficient blocks sharing the data term.

    Block 1 carries the pass-through-origin constraint that makes the
    decomposition unique; it enters the c-update as a KKT bordering of the
    normal equations, solved once per component per iteration from a single
    LU factorization.
    """
    cfg = config or AdmmConfig()
    lam1 = _check_lambda(lam1, "lambda1")
    lam2 = _check_lambda(lam2, "lambda2")
    P = _stack_points(px, py)
    H1d, H2d, L1d, L2d = H1.entries, H2.entries, L1.entries, L2.entries
    n = H1d.shape[1]
    if H2d.shape[1] != n or L1d.shape[1] != n or L2d.shape[1] != n:
        raise UsageError("hybrid blocks must share the coefficient count")
    if H1d.shape[0] != P.shape[0] or H2d.shape[0] != P.shape[0]:
        raise UsageError("system matrices disagree with the number of points")

    row_x, row_y = constraint_rows
    row = np.asarray(row_x, dtype=float)
    if row.shape != (n,) or not np.array_equal(row, np.asarray(row_y, dtype=float)):
        raise UsageError("constraint rows must be two identical length-N vectors")
    if not np.any(row):
        raise ConfigurationError("constraint row is identically zero")

    rho = cfg.rho
    kappa1 = lam1 / (2.0 * rho)
    kappa2 = lam2 / (2.0 * rho)
    prox = _prox(cfg.regularizer)

    A = np.hstack([H1d, H2d])
    G = A.T @ A
    G[:n, :n] += rho * (L1d.T @ L1d)
    G[n:, n:] += rho * (L2d.T @ L2d)
    K = np.zeros((2 * n + 1, 2 * n + 1))
    K[: 2 * n, : 2 * n] = G
    K[: 2 * n, 2 * n][:n] = row
    K[2 * n, :n] = row
    lu = _lu_factor_with_lift(K, 2 * n)

    AtP = A.T @ P
    L1T, L2T = L1d.T, L2d.T

    Z = np.zeros((2 * n, 2))
    U = np.zeros((2 * n, 2))
    Cs = np.zeros((2 * n, 2))
    rhs = np.zeros((2 * n + 1, 2))
    sqrt_size = math.sqrt(Z.size)

    def reg_correction(rows2: np.ndarray) -> np.ndarray:
        return np.vstack([L1T @ rows2[:n], L2T @ rows2[n:]])

    converged = False
    iterations = 0
    r_pri = r_dua = math.inf
    for iterations in range(1, cfg.max_iters + 1):
        rhs[: 2 * n] = AtP + rho * reg_correction(Z - U)
        rhs[2 * n] = 0.0
        sol = scipy.linalg.lu_solve(lu, rhs)
        Cs = sol[: 2 * n]
        W = np.vstack([L1d @ Cs[:n], L2d @ Cs[n:]])
        Z_old = Z
        V = W + U
        Z = np.vstack([prox(V[:n], kappa1), prox(V[n:], kappa2)])
        U = U + W - Z

        r_pri = float(np.linalg.norm(W - Z))
        r_dua = float(rho * np.linalg.norm(reg_correction(Z - Z_old)))
        eps_pri = sqrt_size * cfg.tol_abs + cfg.tol_rel * max(
            np.linalg.norm(W), np.linalg.norm(Z)
        )
        eps_dua = sqrt_size * cfg.tol_abs + cfg.tol_rel * rho * np.linalg.norm(
            reg_correction(U)
        )
        if r_pri <= eps_pri and r_dua <= eps_dua:
            converged = True
            break

    C1, C2 = Cs[:n], Cs[n:]
    objective = (
        float(np.sum((H1d @ C1 + H2d @ C2 - P) ** 2))
        + lam1 * _reg_value(L1d @ C1, cfg.regularizer)
        + lam2 * _reg_value(L2d @ C2, cfg.regularizer)
    )
    return SolveResult(
        blocks=(C1, C2),
        objective=objective,
        iterations=iterations,
        converged=converged,
        residuals=(r_pri, r_dua),
    )
