"""Share of the power budget burned in the users' PAs at the exact optimum.

For each circuit-power level rho (applied to rho_r, rho_d and rho_s alike)
and each rate target, optimizes the integer design and reports what
fraction of the total consumption the power amplifiers account for. The
fraction falls with the rate target: hardware, not radiated power,
dominates large systems.

    python3 scripts/pa_fraction_sweep.py --rates 50 100 300 1000 \
        --rho-levels 0.01 1 100 --out pa_fraction.csv
"""

import argparse
import sys

from mimo_ee.integer_opt import optimize_exact
from mimo_ee.link import Detector
from mimo_ee.report import render_csv
from mimo_ee.units import SystemParams

COLUMNS = ("rho", "R", "detector", "M_star", "K_star", "zeta_star",
           "pa_fraction", "error")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rates", type=float, nargs="+",
                   default=[100.0, 1000.0],
                   help="rate targets, bits/s/Hz (default: 100 1000)")
    p.add_argument("--rho-levels", type=float, nargs="+",
                   default=[1e-2, 1.0, 1e2],
                   help="circuit-power levels (default: 0.01 1 100)")
    p.add_argument("--alpha", type=float, default=2.0,
                   help="PA slope (default: 2)")
    p.add_argument("--detector", choices=("mrc", "zf", "both"),
                   default="mrc", help="receiver type (default: mrc)")
    p.add_argument("--out", default=None,
                   help="CSV output path (default: stdout)")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    detectors = {"mrc": (Detector.MRC,), "zf": (Detector.ZF,),
                 "both": (Detector.MRC, Detector.ZF)}[args.detector]
    records = []
    for rho in args.rho_levels:
        for rate in args.rates:
            theta = SystemParams(R=rate, alpha=args.alpha, rho_r=rho,
                                 rho_d=rho, rho_s=rho)
            for det in detectors:
                row = {c: None for c in COLUMNS}
                row.update(rho=rho, R=rate, detector=det)
                try:
                    opt = optimize_exact(theta, det)
                    row.update(M_star=opt.m_star, K_star=opt.k_star,
                               zeta_star=opt.zeta_star,
                               pa_fraction=opt.report.pa_fraction)
                except (ValueError, ArithmeticError) as exc:
                    row["error"] = str(exc)
                records.append(row)
    text = render_csv(records, COLUMNS)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
