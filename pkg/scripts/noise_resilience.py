"""Knot counts under increasing measurement noise.

Fits the half-step-offset triangle (six structural innovation pairs) at a few
SNR levels.  With the group regularizer the reported K stays at the structural
count over a wide noise range when lambda grows with the noise floor.
"""

import argparse

import numpy as np

from splinefit import AdmmConfig, add_noise, fit_single
from splinefit.contours import polygon_contour

TRIANGLE = [(0.0, 0.0), (12.0, 0.0), (12.0, 9.0)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=36)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--reg", choices=("group", "separable"), default="group")
    args = ap.parse_args()

    ladder = [(np.inf, 0.5), (47.0, 1.0), (41.0, 2.0), (35.0, 4.0)]
    pts = polygon_contour(TRIANGLE, args.points, offset=0.5)

    print(f"# triangle M={args.points} offset=0.5 reg={args.reg} seed={args.seed}")
    print(f"{'snr_db':>8} {'lambda':>8} {'K':>3} {'qfe':>12}")
    for snr, lam in ladder:
        noisy = add_noise(pts, snr, args.seed)
        cfg = AdmmConfig(rho=max(1.0, lam), max_iters=100000,
                         tol_abs=1e-11, tol_rel=1e-9)
        _, rep = fit_single(noisy, 1, lam, regularizer=args.reg, admm=cfg)
        print(f"{snr:8.1f} {lam:8.3f} {rep.K:3d} {rep.qfe:12.6e}")


if __name__ == "__main__":
    main()
