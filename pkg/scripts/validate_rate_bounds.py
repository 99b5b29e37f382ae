"""Monte-Carlo check that the closed-form rates are achievable on average.

Simulates the i.i.d. Rayleigh uplink at one design (m, k) across a grid of
transmit SNRs and reports the empirical ergodic sum rate next to the
closed-form expression the optimizer relies on. The margin column should
be positive and large against the confidence halfwidth: the closed forms
are lower bounds on the true ergodic rate.

    python3 scripts/validate_rate_bounds.py --m 64 --k 8 \
        --gammas 0.05 0.1 0.5 --trials 100000 --seed 2026 --out mc.csv
"""

import argparse
import sys

from mimo_ee.link import Detector
from mimo_ee.montecarlo import McConfig
from mimo_ee.report import VALIDATION_COLUMNS, render_csv, validation_records


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--m", type=int, default=64,
                   help="BS antennas (default: 64)")
    p.add_argument("--k", type=int, default=8,
                   help="users (default: 8)")
    p.add_argument("--gammas", type=float, nargs="+",
                   default=[0.05, 0.1, 0.5],
                   help="normalized transmit SNRs (default: 0.05 0.1 0.5)")
    p.add_argument("--detector", choices=("mrc", "zf", "both"),
                   default="both", help="receiver type (default: both)")
    p.add_argument("--trials", type=int, default=100_000,
                   help="channel draws per point (default: 100000)")
    p.add_argument("--seed", type=int, default=0,
                   help="RNG seed (default: 0)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads (default: 1)")
    p.add_argument("--out", default=None,
                   help="CSV output path (default: stdout)")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    detectors = {"mrc": (Detector.MRC,), "zf": (Detector.ZF,),
                 "both": (Detector.MRC, Detector.ZF)}[args.detector]
    configs = [
        McConfig(m=args.m, k=args.k, gamma=gamma, detector=det,
                 trials=args.trials, seed=args.seed)
        for det in detectors for gamma in args.gammas]
    text = render_csv(validation_records(configs, threads=args.threads),
                      VALIDATION_COLUMNS)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
