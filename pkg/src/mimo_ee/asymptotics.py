"""Large-rate behavior: constant per-user-rate scaling and detector bounds.

Growing the rate target along the trajectory K = R/c with the matching
closed-form antenna count keeps the per-user spectral efficiency pinned
at c. The resulting efficiency has a simple closed form in R whose limit
is finite, which explains the saturation seen in exact-optimizer sweeps.
The module also provides the analytic cap on the relaxed MRC efficiency
(valid beyond explicit rate thresholds) and an empirical per-rate
comparison of the two detector relaxations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .efficiency import evaluate_efficiency
from .link import AntennaConfig, Detector, exp2_sat
from .relaxation import minimize_relaxed, optimal_m
from .units import PowerProfile, SystemParams

_CONSISTENCY_REL_TOL = 1e-9


@dataclass(frozen=True)
class TrajectorySpec:
    """Scaling family with fixed per-user spectral efficiency c."""

    c: float                 # bits/s/Hz per user, > 0
    profile: PowerProfile    # rate-independent power parameters

    def __post_init__(self) -> None:
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be finite and > 0, got {self.c!r}")


@dataclass(frozen=True)
class TrajectoryPoint:
    R: float
    k: float      # R / c users
    m: float      # matching closed-form MRC antenna count
    zeta: float


@dataclass(frozen=True)
class Thresholds:
    """Rate floors above which the relaxed-MRC efficiency cap is proven."""

    r1: float
    r2: float


@dataclass(frozen=True)
class ComparisonPoint:
    """Relaxed efficiencies of both detectors at one rate target."""

    R: float
    zeta_mrc: float
    zeta_zf: float
    mrc_less: bool


def trajectory_zeta(spec: TrajectorySpec, R: float) -> float:
    """Closed-form efficiency of the constant-per-user-rate design at R."""
    c, p = spec.c, spec.profile
    e = exp2_sat(c) - 1.0
    den = (2.0 * math.sqrt((p.alpha * p.rho_r / R) * e / c)
           + p.rho_r / R + p.rho_s / R + p.rho_d / c
           + p.rho_r * (1.0 / c - 1.0 / R) * e)
    return 1.0 / den


def trajectory_point(spec: TrajectorySpec, R: float) -> TrajectoryPoint:
    """Design point and efficiency of the scaling family at rate target R.

    The efficiency is computed twice, from the closed form in R and by
    direct evaluation at the produced (m, k); a relative disagreement
    beyond 1e-9 means the two code paths have drifted apart and raises
    RuntimeError rather than returning either number.
    """
    if not (math.isfinite(R) and R > spec.c):
        raise ValueError(
            f"R must be finite and exceed the per-user rate c={spec.c}, got {R!r}")
    theta = spec.profile.at_rate(R)
    k = R / spec.c
    m = optimal_m(theta, k, Detector.MRC)
    zeta = trajectory_zeta(spec, R)
    direct = evaluate_efficiency(
        AntennaConfig(M=m, K=k, relaxed=True), theta, Detector.MRC).zeta
    if abs(zeta - direct) > _CONSISTENCY_REL_TOL * abs(direct):
        raise RuntimeError(
            f"closed-form efficiency {zeta!r} disagrees with direct "
            f"evaluation {direct!r} at R={R}; internal inconsistency")
    return TrajectoryPoint(R=float(R), k=k, m=m, zeta=zeta)


def trajectory_limit(spec: TrajectorySpec) -> float:
    """Efficiency that the constant-per-user-rate family approaches as R grows."""
    c, p = spec.c, spec.profile
    den = p.rho_d + p.rho_r * (exp2_sat(c) - 1.0)
    if den <= 0:
        raise ValueError(
            "limit undefined: rho_d + rho_r*(2^c - 1) must be positive")
    if not math.isfinite(den):
        raise ValueError("2^c overflows double range; c is unrealistically large")
    return c / den


def thresholds(theta: SystemParams) -> Thresholds:
    """Rate floors for the relaxed-MRC efficiency cap at theta's power profile."""
    if theta.rho_r <= 0:
        raise ValueError(f"rho_r must be > 0, got {theta.rho_r!r}")
    r1 = max(4.0, 4.0 * math.log2(1.0 + theta.alpha / theta.rho_r))
    r2 = max(
        math.log2(1.0 + 9.0 * theta.rho_d ** 2 / (theta.alpha * theta.rho_r)),
        2.0 * math.log2(49.0 * theta.rho_r / theta.alpha))
    return Thresholds(r1=r1, r2=r2)


def mrc_upper_bound_check(theta: SystemParams) -> bool:
    """Verify that the relaxed MRC efficiency sits below its analytic cap.

    The cap 1 / min(1/zeta''_zf, rho_d + rho_r/R + rho_s/R) is only proven
    for rates above both thresholds, so smaller rates raise instead of
    returning a vacuous verdict.
    """
    t = thresholds(theta)
    if not theta.R > max(t.r1, t.r2):
        raise ValueError(
            f"hypotheses unmet: need R > max(r1, r2) = {max(t.r1, t.r2)!r}, "
            f"got R = {theta.R!r}; no claim can be checked")
    zeta_mrc = minimize_relaxed(theta, Detector.MRC).zeta
    zeta_zf = minimize_relaxed(theta, Detector.ZF).zeta
    cap = 1.0 / min(1.0 / zeta_zf,
                    theta.rho_d + theta.rho_r / theta.R + theta.rho_s / theta.R)
    return zeta_mrc < cap


def zf_vs_mrc_compare(rates: Iterable[float],
                      profile: PowerProfile) -> Sequence[ComparisonPoint]:
    """Relaxed MRC vs ZF efficiency across rate targets, ordered as given."""
    out = []
    for rate in rates:
        theta = profile.at_rate(float(rate))
        zeta_mrc = minimize_relaxed(theta, Detector.MRC).zeta
        zeta_zf = minimize_relaxed(theta, Detector.ZF).zeta
        out.append(ComparisonPoint(R=float(rate), zeta_mrc=zeta_mrc,
                                   zeta_zf=zeta_zf,
                                   mrc_less=zeta_mrc < zeta_zf))
    return out
