"""Sweep the exact and relaxed energy-efficiency optima across rate targets.

Produces the headline trade-off table: for each sum-rate target R and each
detector, the best integer design (M*, K*), its efficiency, the continuous
relaxation, and the power budget of the optimum.

    python3 scripts/ee_tradeoff_sweep.py --r-min 10 --r-max 1000 --points 25 \
        --rho-r 1e3 --rho-d 1e3 --rho-s 1e3 --out tradeoff.csv
"""

import argparse
import sys

import numpy as np

from mimo_ee.link import Detector
from mimo_ee.report import SweepSpec, render_csv, sweep_columns, sweep_records
from mimo_ee.units import PowerProfile


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--r-min", type=float, default=10.0,
                   help="smallest rate target, bits/s/Hz (default: 10)")
    p.add_argument("--r-max", type=float, default=1000.0,
                   help="largest rate target (default: 1000)")
    p.add_argument("--points", type=int, default=25,
                   help="rate grid size, log-spaced (default: 25)")
    p.add_argument("--alpha", type=float, default=2.0,
                   help="PA slope (default: 2)")
    p.add_argument("--rho-r", type=float, default=1.0,
                   help="normalized per-antenna power (default: 1)")
    p.add_argument("--rho-d", type=float, default=1.0,
                   help="normalized per-user power (default: 1)")
    p.add_argument("--rho-s", type=float, default=1.0,
                   help="normalized residual power (default: 1)")
    p.add_argument("--detector", choices=("mrc", "zf", "both"),
                   default="both", help="receiver type (default: both)")
    p.add_argument("--k-max", type=int, default=None,
                   help="cap the user-count search")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads (default: 1)")
    p.add_argument("--out", default=None,
                   help="CSV output path (default: stdout)")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    detectors = {"mrc": (Detector.MRC,), "zf": (Detector.ZF,),
                 "both": (Detector.MRC, Detector.ZF)}[args.detector]
    rates = np.geomspace(args.r_min, args.r_max, args.points)
    spec = SweepSpec(
        r_values=tuple(dict.fromkeys(float(r) for r in rates)),
        theta_base=PowerProfile(alpha=args.alpha, rho_r=args.rho_r,
                                rho_d=args.rho_d, rho_s=args.rho_s),
        detectors=detectors,
        outputs=frozenset({"exact", "relaxed", "pa_fraction"}),
        k_max=args.k_max)
    text = render_csv(sweep_records(spec, threads=args.threads),
                      sweep_columns(spec))
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
