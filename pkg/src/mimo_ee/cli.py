"""Command-line frontend.

Reads one JSON config file describing the system, runs the requested
computation, and writes a CSV (or JSON) table to stdout or a file. Exit
codes: 0 on success, 2 for configuration problems, 3 when the requested
point is numerically out of reach (infeasible rate, overflow, hypotheses
unmet). Every failure prints a single machine-parsable line on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from .asymptotics import TrajectorySpec
from .link import Detector
from .montecarlo import McConfig
from .report import (ERROR_COLUMN, SweepSpec, THRESHOLD_COLUMNS,
                     TRAJECTORY_COLUMNS, VALIDATION_COLUMNS, render_csv,
                     render_json, sweep_columns, sweep_records,
                     threshold_record, trajectory_records, validation_records)
from .units import PhysicalParams, PowerProfile, normalize, profile_of

_NUMERIC_ERRORS = (ValueError, ArithmeticError, RuntimeError)

_PHYSICAL_KEYS = ("bandwidth_hz", "noise_psd", "path_gain", "pa_slope",
                  "p_r", "p_t", "p_dec", "p_s")
_NORMALIZED_KEYS = ("alpha", "rho_r", "rho_d", "rho_s")
_TOP_KEYS = {"physical", "normalized", "sweep", "montecarlo", "trajectory",
             "optimize", "thresholds"}

_MC_DEFAULT_TRIALS = 100_000
_MC_DEFAULT_SEED = 0


class ConfigError(Exception):
    """The config file cannot be used as given."""


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("top level of the config must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    return data


def _section(cfg: dict, name: str, allowed: set[str], *,
             required: bool) -> dict | None:
    sec = cfg.get(name)
    if sec is None:
        if required:
            raise ConfigError(f"config needs a '{name}' section")
        return None
    if not isinstance(sec, dict):
        raise ConfigError(f"'{name}' must be a JSON object")
    unknown = set(sec) - allowed
    if unknown:
        raise ConfigError(
            f"unknown keys in '{name}': {sorted(unknown)}; allowed: {sorted(allowed)}")
    return sec


def _num(sec: dict, key: str, ctx: str) -> float:
    if key not in sec:
        raise ConfigError(f"'{ctx}' needs '{key}'")
    value = sec[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{ctx}.{key}' must be a number, got {value!r}")
    return float(value)


def _int(sec: dict, key: str, ctx: str, default: int | None = None) -> int:
    if key not in sec:
        if default is None:
            raise ConfigError(f"'{ctx}' needs '{key}'")
        return default
    value = sec[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"'{ctx}.{key}' must be an integer, got {value!r}")
    return value


def _num_list(sec: dict, key: str, ctx: str) -> tuple[float, ...]:
    if key not in sec:
        raise ConfigError(f"'{ctx}' needs '{key}'")
    value = sec[key]
    if not isinstance(value, list) or not value:
        raise ConfigError(f"'{ctx}.{key}' must be a nonempty array of numbers")
    out = []
    for item in value:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ConfigError(
                f"'{ctx}.{key}' must contain only numbers, got {item!r}")
        out.append(float(item))
    return tuple(out)


def _detector(value: object, ctx: str) -> Detector:
    if isinstance(value, str):
        for det in Detector:
            if value.lower() == det.value:
                return det
    raise ConfigError(
        f"'{ctx}' must be one of {[d.value for d in Detector]}, got {value!r}")


def _detector_list(sec: dict, ctx: str) -> tuple[Detector, ...]:
    value = sec.get("detectors")
    if value is None:
        return (Detector.MRC, Detector.ZF)
    if not isinstance(value, list) or not value:
        raise ConfigError(f"'{ctx}.detectors' must be a nonempty array")
    return tuple(_detector(item, f"{ctx}.detectors") for item in value)


def _profile(cfg: dict) -> PowerProfile:
    physical = _section(cfg, "physical", set(_PHYSICAL_KEYS), required=False)
    normalized = _section(cfg, "normalized", set(_NORMALIZED_KEYS),
                          required=False)
    if physical is not None and normalized is not None:
        raise ConfigError("'physical' and 'normalized' are mutually exclusive")
    if physical is None and normalized is None:
        raise ConfigError(
            "config needs a 'physical' or a 'normalized' section")
    try:
        if normalized is not None:
            return PowerProfile(
                alpha=_num(normalized, "alpha", "normalized"),
                rho_r=_num(normalized, "rho_r", "normalized"),
                rho_d=_num(normalized, "rho_d", "normalized"),
                rho_s=_num(normalized, "rho_s", "normalized"))
        params = PhysicalParams(
            **{key: _num(physical, key, "physical") for key in _PHYSICAL_KEYS})
        # the normalization scale does not depend on the rate; any rate works
        return profile_of(normalize(params, 1.0))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _sweep_spec(cfg: dict, args: argparse.Namespace,
                outputs_override: set[str] | None = None) -> SweepSpec:
    profile = _profile(cfg)
    sec = _section(cfg, "sweep",
                   {"r_values", "detectors", "outputs", "trajectory_c"},
                   required=True)
    if outputs_override is not None:
        outputs = frozenset(outputs_override)
    else:
        raw = sec.get("outputs", ["exact", "relaxed"])
        if not isinstance(raw, list) or not raw:
            raise ConfigError("'sweep.outputs' must be a nonempty array")
        for item in raw:
            if not isinstance(item, str):
                raise ConfigError(
                    f"'sweep.outputs' must contain strings, got {item!r}")
        outputs = frozenset(raw)
    trajectory_c = None
    if "trajectory_c" in sec:
        trajectory_c = _num(sec, "trajectory_c", "sweep")
    try:
        return SweepSpec(
            r_values=_num_list(sec, "r_values", "sweep"),
            theta_base=profile,
            detectors=_detector_list(sec, "sweep"),
            outputs=outputs,
            trajectory_c=trajectory_c,
            k_max=args.k_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _cmd_sweep(cfg: dict, args: argparse.Namespace,
               outputs_override: set[str] | None = None):
    spec = _sweep_spec(cfg, args, outputs_override)
    return sweep_records(spec, threads=args.threads), sweep_columns(spec), 0


def _cmd_breakdown(cfg: dict, args: argparse.Namespace):
    return _cmd_sweep(cfg, args, outputs_override={"exact", "pa_fraction"})


def _cmd_optimize(cfg: dict, args: argparse.Namespace):
    profile = _profile(cfg)
    sec = _section(cfg, "optimize", {"R", "detectors"}, required=True)
    rate = _num(sec, "R", "optimize")
    try:
        spec = SweepSpec(
            r_values=(rate,), theta_base=profile,
            detectors=_detector_list(sec, "optimize"),
            outputs=frozenset({"exact", "relaxed", "pa_fraction"}),
            k_max=args.k_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    records = sweep_records(spec, threads=args.threads)
    failures = [str(row[ERROR_COLUMN]) for row in records if row[ERROR_COLUMN]]
    rc = 0
    if failures:
        print(f"error: numeric: {failures[0]}", file=sys.stderr)
        rc = 3
    return records, sweep_columns(spec), rc


def _cmd_trajectory(cfg: dict, args: argparse.Namespace):
    profile = _profile(cfg)
    sec = _section(cfg, "trajectory", {"c", "r_values"}, required=True)
    try:
        spec = TrajectorySpec(c=_num(sec, "c", "trajectory"), profile=profile)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rates = _num_list(sec, "r_values", "trajectory")
    for rate in rates:
        if not math.isfinite(rate):
            raise ConfigError("'trajectory.r_values' must be finite")
    return trajectory_records(spec, rates), TRAJECTORY_COLUMNS, 0


def _cmd_validate(cfg: dict, args: argparse.Namespace):
    sec = _section(cfg, "montecarlo", {"points", "trials", "seed"},
                   required=True)
    default_trials = _int(sec, "trials", "montecarlo", _MC_DEFAULT_TRIALS)
    default_seed = _int(sec, "seed", "montecarlo", _MC_DEFAULT_SEED)
    if args.seed is not None:
        default_seed = args.seed
    points = sec.get("points")
    if not isinstance(points, list) or not points:
        raise ConfigError("'montecarlo.points' must be a nonempty array")
    configs = []
    for i, point in enumerate(points):
        ctx = f"montecarlo.points[{i}]"
        if not isinstance(point, dict):
            raise ConfigError(f"'{ctx}' must be a JSON object")
        unknown = set(point) - {"m", "k", "gamma", "detector", "trials", "seed"}
        if unknown:
            raise ConfigError(f"unknown keys in '{ctx}': {sorted(unknown)}")
        if "detector" not in point:
            raise ConfigError(f"'{ctx}' needs 'detector'")
        try:
            configs.append(McConfig(
                m=_int(point, "m", ctx),
                k=_int(point, "k", ctx),
                gamma=_num(point, "gamma", ctx),
                detector=_detector(point["detector"], f"{ctx}.detector"),
                trials=_int(point, "trials", ctx, default_trials),
                seed=_int(point, "seed", ctx, default_seed)))
        except ValueError as exc:
            raise ConfigError(f"{ctx}: {exc}") from exc
    records = validation_records(configs, threads=args.threads)
    return records, VALIDATION_COLUMNS, 0


def _cmd_thresholds(cfg: dict, args: argparse.Namespace):
    profile = _profile(cfg)
    sec = _section(cfg, "thresholds", {"R"}, required=True)
    try:
        theta = profile.at_rate(_num(sec, "R", "thresholds"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    record = threshold_record(theta)
    rc = 0
    if record["r1"] is None:
        print(f"error: numeric: {record[ERROR_COLUMN]}", file=sys.stderr)
        rc = 3
    return [record], THRESHOLD_COLUMNS, rc


_COMMANDS = {
    "optimize": _cmd_optimize,
    "sweep": _cmd_sweep,
    "breakdown": _cmd_breakdown,
    "trajectory": _cmd_trajectory,
    "validate": _cmd_validate,
    "thresholds": _cmd_thresholds,
}


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(
            f"seed must fit in 64 unsigned bits, got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="FILE",
                        help="JSON config file")
    common.add_argument("--out", metavar="FILE",
                        help="write the table here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format (default: csv)")
    common.add_argument("--threads", type=_positive_int, default=1,
                        metavar="N", help="worker threads (default: 1)")
    common.add_argument("--seed", type=_seed_int, default=None, metavar="U64",
                        help="override the Monte-Carlo seed from the config")
    common.add_argument("--k-max", type=_positive_int, default=None,
                        metavar="N", help="cap the user-count search range")

    parser = argparse.ArgumentParser(
        prog="mimo-ee",
        description="Energy-efficiency optimization of a multiuser "
                    "massive-MIMO uplink with MRC or ZF reception.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("optimize", parents=[common],
                   help="best integer design for one rate target")
    sub.add_parser("sweep", parents=[common],
                   help="efficiency table across rate targets")
    sub.add_parser("breakdown", parents=[common],
                   help="power budget of the optimum across rate targets")
    sub.add_parser("trajectory", parents=[common],
                   help="constant per-user-rate scaling family")
    sub.add_parser("validate", parents=[common],
                   help="Monte-Carlo check of the closed-form rates")
    sub.add_parser("thresholds", parents=[common],
                   help="rate thresholds for the MRC efficiency cap")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {out}: {exc}") from exc


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        records, columns, rc = _COMMANDS[args.command](cfg, args)
        text = (render_json(records, columns) if args.format == "json"
                else render_csv(records, columns))
        _emit(text, args.out)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"error: numeric: {exc}", file=sys.stderr)
        return 3
    return rc


if __name__ == "__main__":
    sys.exit(main())
