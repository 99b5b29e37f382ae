"""Growth of the optimal antenna and user counts with the rate target.

Tracks (M*, K*) along a rate sweep together with the ratio between the
exact integer efficiency and its continuous relaxation. Both counts grow
roughly linearly in R while the ratio climbs toward one, which is what
makes the relaxation useful as a design rule for large systems. The
per-user rate R/K* settles near a constant.

    python3 scripts/optimal_pair_growth.py --r-min 50 --r-max 2000 \
        --points 15 --rho-r 1e3 --rho-d 1e3 --rho-s 1e3 --out growth.csv
"""

import argparse
import sys

import numpy as np

from mimo_ee.integer_opt import optimal_pair_trace
from mimo_ee.link import Detector
from mimo_ee.report import render_csv
from mimo_ee.units import SystemParams

COLUMNS = ("R", "detector", "M_star", "K_star", "per_user_rate",
           "zeta_star", "zeta_relaxed", "ratio")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--r-min", type=float, default=50.0,
                   help="smallest rate target (default: 50)")
    p.add_argument("--r-max", type=float, default=2000.0,
                   help="largest rate target (default: 2000)")
    p.add_argument("--points", type=int, default=15,
                   help="rate grid size, log-spaced (default: 15)")
    p.add_argument("--alpha", type=float, default=2.0,
                   help="PA slope (default: 2)")
    p.add_argument("--rho-r", type=float, default=1e3,
                   help="normalized per-antenna power (default: 1e3)")
    p.add_argument("--rho-d", type=float, default=1e3,
                   help="normalized per-user power (default: 1e3)")
    p.add_argument("--rho-s", type=float, default=1e3,
                   help="normalized residual power (default: 1e3)")
    p.add_argument("--detector", choices=("mrc", "zf"), default="mrc",
                   help="receiver type (default: mrc)")
    p.add_argument("--out", default=None,
                   help="CSV output path (default: stdout)")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    det = Detector.MRC if args.detector == "mrc" else Detector.ZF
    theta_base = SystemParams(R=args.r_min, alpha=args.alpha,
                              rho_r=args.rho_r, rho_d=args.rho_d,
                              rho_s=args.rho_s)
    rates = list(dict.fromkeys(
        float(r) for r in np.geomspace(args.r_min, args.r_max, args.points)))
    records = []
    for point in optimal_pair_trace(rates, theta_base, det):
        records.append({
            "R": point.R, "detector": det,
            "M_star": point.m_star, "K_star": point.k_star,
            "per_user_rate": point.R / point.k_star,
            "zeta_star": point.zeta_star,
            "zeta_relaxed": point.zeta_relaxed,
            "ratio": point.ratio})
    text = render_csv(records, COLUMNS)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
