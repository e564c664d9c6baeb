"""Sparse closed-curve fitting with periodic B-splines and ADMM."""

from .admm import (
    AdmmConfig,
    SolveResult,
    elementwise_soft_threshold,
    group_soft_threshold,
    solve_hybrid,
    solve_single,
)
from .bspline import (
    SUPPORTED_DEGREES,
    SplineSpace,
    eval_bspline,
    eval_periodized_basis,
    finite_diff_filter,
    sampled_basis_sequence,
)
from .errors import ConfigurationError, NumericalError, UsageError
from .fitting import (
    CurveModel,
    FitReport,
    Knot,
    SplineBlock,
    add_noise,
    as_contour,
    evaluate_curve,
    extract_knots,
    fit_hybrid,
    fit_single,
    knot_removal_baseline,
    qfe,
    rotate_about_centroid,
    sample_curve,
)
from .operators import (
    RegMatrix,
    SystemMatrix,
    build_constraint_rows,
    build_reg_matrix,
    build_system_matrix,
    group_l1l2_norm,
    rotate_points,
    separable_l1_norm,
)

__version__ = "0.1.0"

__all__ = [
    "AdmmConfig",
    "ConfigurationError",
    "CurveModel",
    "FitReport",
    "Knot",
    "NumericalError",
    "RegMatrix",
    "SUPPORTED_DEGREES",
    "SolveResult",
    "SplineBlock",
    "SplineSpace",
    "SystemMatrix",
    "UsageError",
    "add_noise",
    "as_contour",
    "build_constraint_rows",
    "build_reg_matrix",
    "build_system_matrix",
    "elementwise_soft_threshold",
    "eval_bspline",
    "eval_periodized_basis",
    "evaluate_curve",
    "extract_knots",
    "finite_diff_filter",
    "fit_hybrid",
    "fit_single",
    "group_l1l2_norm",
    "group_soft_threshold",
    "knot_removal_baseline",
    "qfe",
    "rotate_about_centroid",
    "rotate_points",
    "sample_curve",
    "sampled_basis_sequence",
    "separable_l1_norm",
    "solve_hybrid",
    "solve_single",
]
