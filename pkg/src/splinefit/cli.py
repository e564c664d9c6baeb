"""Command-line interface.

Subcommands: ``fit``, ``fit-hybrid``, ``render``, ``experiment-rotate``,
``experiment-noise``, ``compare-sparsity``.  Exit status is 0 on success, 1 on
usage errors, and 2 on numerical failures.  All numeric output is printed with
12 significant digits and every run is deterministic for fixed inputs.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .admm import AdmmConfig
from .errors import NumericalError, UsageError
from .fitting import (
    CurveModel,
    add_noise,
    evaluate_curve,
    fit_hybrid,
    fit_single,
    knot_removal_baseline,
    rotate_about_centroid,
)
from .modeldoc import (
    build_document,
    load_document,
    model_from_document,
    read_contour_csv,
    save_document,
    write_text_atomic,
)
from .render import render_svg

_REG_MODES = {"ritv": "group", "tvl1": "separable"}


def _fmt(value: float) -> str:
    return "{:.12g}".format(float(value))


def _admm_from_args(args, regularizer: str = "group") -> AdmmConfig:
    return AdmmConfig(
        rho=args.rho,
        max_iters=args.max_iters,
        tol_abs=args.tol_abs,
        tol_rel=args.tol_rel,
        regularizer=regularizer,
    )


def _admm_settings_dict(cfg: AdmmConfig) -> dict:
    return {
        "rho": float(cfg.rho),
        "max_iters": int(cfg.max_iters),
        "tol_abs": float(cfg.tol_abs),
        "tol_rel": float(cfg.tol_rel),
    }


def _print_report(report, extra_lines: list[str] | None = None) -> None:
    print(f"qfe {_fmt(report.qfe)}")
    print(f"K {report.K}")
    for line in extra_lines or []:
        print(line)
    print(f"objective {_fmt(report.objective)}")
    print(f"iterations {report.iterations}")
    print(f"converged {'true' if report.converged else 'false'}")
    print(f"knot_eps {_fmt(report.knot_eps)}")


def _write_outputs(args, model, report, lambdas, regularizer, cfg) -> None:
    doc = build_document(model, lambdas, regularizer, _admm_settings_dict(cfg), report)
    save_document(args.output, doc)
    if args.svg:
        svg = render_svg(
            model,
            samples_per_unit=args.samples_per_unit,
            show_knots=True,
            knot_eps=args.knot_eps,
        )
        write_text_atomic(args.svg, svg)


def cmd_fit(args) -> int:
    points = read_contour_csv(args.input)
    regularizer = _REG_MODES[args.reg]
    cfg = _admm_from_args(args, regularizer)
    model, report = fit_single(
        points,
        alpha=args.degree,
        lam=args.lam,
        num_coeffs=args.num_coeffs,
        regularizer=regularizer,
        admm=cfg,
        knot_eps=args.knot_eps,
    )
    _write_outputs(args, model, report, [args.lam], args.reg, cfg)
    _print_report(report)
    return 0


def cmd_fit_hybrid(args) -> int:
    points = read_contour_csv(args.input)
    cfg = _admm_from_args(args, "group")
    model, report = fit_hybrid(
        points,
        alpha1=args.degree1,
        alpha2=args.degree2,
        lam1=args.lam1,
        lam2=args.lam2,
        num_coeffs=args.num_coeffs,
        admm=cfg,
        knot_eps=args.knot_eps,
    )
    block1 = CurveModel(blocks=(model.blocks[0],))
    at_zero = evaluate_curve(block1, np.array([0.0]))[0]
    extra = [
        f"K1 {len(report.knots_in_block(1))}",
        f"K2 {len(report.knots_in_block(2))}",
        f"x1_abs {_fmt(abs(at_zero[0]))}",
        f"y1_abs {_fmt(abs(at_zero[1]))}",
    ]
    _write_outputs(args, model, report, [args.lam1, args.lam2], "ritv", cfg)
    _print_report(report, extra)
    return 0


def cmd_render(args) -> int:
    model = model_from_document(load_document(args.input))
    svg = render_svg(
        model,
        samples_per_unit=args.samples_per_unit,
        show_knots=args.show_knots,
        knot_eps=args.knot_eps,
    )
    write_text_atomic(args.svg, svg)
    return 0


def cmd_experiment_rotate(args) -> int:
    points = read_contour_csv(args.input)
    regularizer = _REG_MODES[args.reg]
    cfg = _admm_from_args(args, regularizer)
    thetas = args.theta if args.theta is not None else [0.0]
    print("theta_deg qfe K")
    k_values = []
    for theta_deg in thetas:
        rotated = rotate_about_centroid(points, math.radians(theta_deg))
        _, report = fit_single(
            rotated,
            alpha=args.degree,
            lam=args.lam,
            num_coeffs=args.num_coeffs,
            regularizer=regularizer,
            admm=cfg,
            knot_eps=args.knot_eps,
        )
        k_values.append(report.K)
        print(f"{_fmt(theta_deg)} {_fmt(report.qfe)} {report.K}")
    if regularizer == "group":
        constant = "true" if len(set(k_values)) <= 1 else "false"
        print(f"K_constant {constant}")
    return 0


def cmd_experiment_noise(args) -> int:
    points = read_contour_csv(args.input)
    regularizer = _REG_MODES[args.reg]
    cfg = _admm_from_args(args, regularizer)
    snrs = args.snr_db if args.snr_db is not None else [math.inf]
    lambdas = args.lam if args.lam is not None else [1.0]
    print("snr_db lambda qfe K")
    for snr in snrs:
        noisy = add_noise(points, snr, args.seed)
        for lam in lambdas:
            _, report = fit_single(
                noisy,
                alpha=args.degree,
                lam=lam,
                num_coeffs=args.num_coeffs,
                regularizer=regularizer,
                admm=cfg,
                knot_eps=args.knot_eps,
            )
            print(f"{_fmt(snr)} {_fmt(lam)} {_fmt(report.qfe)} {report.K}")
    return 0


def cmd_compare_sparsity(args) -> int:
    points = read_contour_csv(args.input)
    cfg = _admm_from_args(args, "group")
    _, fit_report = fit_single(
        points,
        alpha=args.degree,
        lam=args.lam,
        num_coeffs=args.num_coeffs,
        regularizer="group",
        admm=cfg,
        knot_eps=args.knot_eps,
    )
    _, base_report = knot_removal_baseline(
        points, alpha=args.degree, target_K=fit_report.K, knot_eps=args.knot_eps
    )
    match = fit_report.K == base_report.K
    ratio = fit_report.qfe / base_report.qfe if base_report.qfe > 0 else math.inf
    print(f"lambda {_fmt(args.lam)}")
    print(f"K_fit {fit_report.K}")
    print(f"K_baseline {base_report.K}")
    print(f"K_match {'true' if match else 'false'}")
    print(f"qfe_fit {_fmt(fit_report.qfe)}")
    print(f"qfe_baseline {_fmt(base_report.qfe)}")
    print(f"qfe_ratio {_fmt(ratio)}")
    if not match:
        print("error: baseline knot count does not match the fit", file=sys.stderr)
        return 2
    return 0


def _add_admm_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rho", type=float, default=1.0, help="ADMM penalty parameter")
    parser.add_argument("--max-iters", type=int, default=10_000, help="iteration cap")
    parser.add_argument("--tol-abs", type=float, default=1e-6, help="absolute tolerance")
    parser.add_argument("--tol-rel", type=float, default=1e-4, help="relative tolerance")


def _add_fit_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--knot-eps", type=float, default=1e-4,
                        help="relative knot detection threshold")
    _add_admm_flags(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splinefit",
        description="Fit sparse closed spline curves to ordered contour points.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit a single spline block")
    fit.add_argument("--input", required=True, help="contour CSV (x,y per line)")
    fit.add_argument("--output", required=True, help="model document to write")
    fit.add_argument("--svg", help="optional SVG rendering to write")
    fit.add_argument("--degree", type=int, required=True, help="spline degree 0..3")
    fit.add_argument("--num-coeffs", type=int, default=None,
                     help="coefficient count N (default: number of points)")
    fit.add_argument("--lambda", dest="lam", type=float, required=True,
                     help="regularization weight")
    fit.add_argument("--reg", choices=sorted(_REG_MODES), default="ritv",
                     help="regularizer: rotation-invariant group (ritv) or separable l1 (tvl1)")
    fit.add_argument("--samples-per-unit", type=int, default=20,
                     help="curve sampling density for SVG output")
    _add_fit_flags(fit)
    fit.set_defaults(func=cmd_fit)

    hybrid = sub.add_parser("fit-hybrid", help="fit two spline blocks of different degrees")
    hybrid.add_argument("--input", required=True)
    hybrid.add_argument("--output", required=True)
    hybrid.add_argument("--svg")
    hybrid.add_argument("--degree1", type=int, required=True, help="lower degree block")
    hybrid.add_argument("--degree2", type=int, required=True, help="higher degree block")
    hybrid.add_argument("--num-coeffs", type=int, default=None)
    hybrid.add_argument("--lambda1", dest="lam1", type=float, required=True)
    hybrid.add_argument("--lambda2", dest="lam2", type=float, required=True)
    hybrid.add_argument("--samples-per-unit", type=int, default=20)
    _add_fit_flags(hybrid)
    hybrid.set_defaults(func=cmd_fit_hybrid)

    render = sub.add_parser("render", help="render a model document to SVG")
    render.add_argument("--input", required=True, help="model document to read")
    render.add_argument("--svg", required=True, help="SVG path to write")
    render.add_argument("--samples-per-unit", type=int, default=20)
    render.add_argument("--show-knots", action="store_true")
    render.add_argument("--knot-eps", type=float, default=1e-4)
    render.set_defaults(func=cmd_render)

    rotate = sub.add_parser("experiment-rotate", help="fit rotated copies of the contour")
    rotate.add_argument("--input", required=True)
    rotate.add_argument("--degree", type=int, required=True)
    rotate.add_argument("--num-coeffs", type=int, default=None)
    rotate.add_argument("--lambda", dest="lam", type=float, required=True)
    rotate.add_argument("--reg", choices=sorted(_REG_MODES), default="ritv")
    rotate.add_argument("--theta", type=float, action="append",
                        help="rotation angle in degrees (repeatable)")
    _add_fit_flags(rotate)
    rotate.set_defaults(func=cmd_experiment_rotate)

    noise = sub.add_parser("experiment-noise", help="fit noisy copies over an SNR/lambda grid")
    noise.add_argument("--input", required=True)
    noise.add_argument("--degree", type=int, required=True)
    noise.add_argument("--num-coeffs", type=int, default=None)
    noise.add_argument("--lambda", dest="lam", type=float, action="append",
                       help="regularization weight (repeatable)")
    noise.add_argument("--snr-db", type=float, action="append",
                       help="signal-to-noise ratio in dB, inf for no noise (repeatable)")
    noise.add_argument("--seed", type=int, default=0, help="noise seed")
    noise.add_argument("--reg", choices=sorted(_REG_MODES), default="ritv")
    _add_fit_flags(noise)
    noise.set_defaults(func=cmd_experiment_noise)

    compare = sub.add_parser("compare-sparsity",
                             help="compare a fit against the greedy knot-removal baseline")
    compare.add_argument("--input", required=True)
    compare.add_argument("--degree", type=int, required=True)
    compare.add_argument("--num-coeffs", type=int, default=None)
    compare.add_argument("--lambda", dest="lam", type=float, required=True)
    _add_fit_flags(compare)
    compare.set_defaults(func=cmd_compare_sparsity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
