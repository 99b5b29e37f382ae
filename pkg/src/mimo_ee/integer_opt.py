"""Exact optimization of integer antenna and user counts.

The search enumerates K in ascending order. For each K the power is convex
in M, so only the floor and ceiling of the continuous optimum (clamped to
the feasible region) need to be checked. A per-K lower bound on the total
power prunes the tail of the K range, which keeps the enumeration finite
without any externally supplied cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .efficiency import EfficiencyReport, evaluate_efficiency
from .link import AntennaConfig, Detector, InfeasibleError, _EXP2_OVERFLOW
from .relaxation import minimize_relaxed, optimal_m
from .units import SystemParams, profile_of


@dataclass(frozen=True)
class Optimum:
    m_star: int
    k_star: int
    zeta_star: float
    report: EfficiencyReport
    detector: Detector
    k_range_searched: tuple[int, int]  # inclusive K interval actually evaluated
    pruned_at: int | None              # first K excluded by the tail bound

    @property
    def objective(self) -> float:
        """Total normalized power at the optimum, i.e. R / zeta_star."""
        return self.report.total_power


@dataclass(frozen=True)
class TracePoint:
    """Best design at one rate target, with the relaxed efficiency beside it."""

    R: float
    m_star: int
    k_star: int
    zeta_star: float
    zeta_relaxed: float
    ratio: float          # zeta_star / zeta_relaxed, at most 1 up to roundoff


def _min_feasible_m(k: int, rate: float, det: Detector) -> int | None:
    """Smallest M admitting finite transmit power at integer K = k, if any."""
    if det is Detector.ZF:
        return k + 1
    if k == 1:
        return 2
    # MRC needs M - 1 strictly above (K-1)*(2^(R/K) - 1). When the rate
    # splits into an integer number of bits per user the boundary is exact
    # in integer arithmetic, so the strictness test has no rounding slack.
    if rate == int(rate) and int(rate) % k == 0:
        boundary = (k - 1) * (2 ** (int(rate) // k) - 1)
        return int(boundary) + 2
    boundary = (k - 1) * (2.0 ** (rate / k) - 1.0)
    if not math.isfinite(boundary):
        return None  # every float-representable M is below the threshold
    m = int(math.floor(boundary)) + 2
    while not (m - 1 > (k - 1) * (2.0 ** (rate / k) - 1.0)):  # rounding slack
        m += 1
    return m


def _best_m_for_k(k: int, theta: SystemParams,
                  det: Detector) -> tuple[int, EfficiencyReport] | None:
    """Optimal integer M at fixed K, or None when the rate is out of reach."""
    if theta.R / k >= _EXP2_OVERFLOW:
        return None
    m_lo = _min_feasible_m(k, theta.R, det)
    if m_lo is None:
        return None
    m_cont = optimal_m(theta, float(k), det)
    if math.isfinite(m_cont):
        candidates = {max(m_lo, int(math.floor(m_cont))),
                      max(m_lo, int(math.ceil(m_cont)))}
    else:
        candidates = {m_lo, m_lo + 1}
    best: tuple[int, EfficiencyReport] | None = None
    for m in sorted(candidates):
        try:
            report = evaluate_efficiency(
                AntennaConfig(M=m, K=k), theta, det)
        except (InfeasibleError, ValueError, OverflowError):
            continue  # OverflowError: M too large for a float at this K
        if best is None or report.total_power < best[1].total_power:
            best = (m, report)
    return best


def _tail_lower_bound(k: int, theta: SystemParams, det: Detector) -> float:
    """Power lower bound valid for every user count >= k."""
    if det is Detector.ZF:
        return (k + 1) * theta.rho_r + k * theta.rho_d + theta.rho_s
    return theta.rho_r + k * theta.rho_d + theta.rho_s


def optimize_exact(theta: SystemParams, det: Detector, *,
                   k_max: int | None = None) -> Optimum:
    """Find the integer (M, K) maximizing energy efficiency.

    Ties break toward smaller K and then smaller M; incumbents are only
    replaced on strict power improvement during the ascending enumeration.
    Requires rho_d > 0 when k_max is not supplied, since otherwise ever
    larger user counts can keep improving and no finite answer exists.
    """
    if theta.rho_r <= 0:
        raise ValueError(
            "rho_r must be > 0: with free BS antennas the optimal M is unbounded")
    if k_max is None and theta.rho_d <= 0:
        raise ValueError(
            "optimum may lie at K -> inf: supply k_max or a positive rho_d")
    if k_max is not None and k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max!r}")

    best: tuple[int, int, EfficiencyReport] | None = None
    pruned_at: int | None = None
    k_hi_seen = 0
    k = 1
    # hard stop well past any sane design; the tail bound normally fires
    # long before this and the cap only guards against degenerate inputs
    k_ceiling = k_max if k_max is not None else 10_000_000
    while k <= k_ceiling:
        if best is not None and _tail_lower_bound(
                k, theta, det) >= best[2].total_power:
            pruned_at = k
            break
        found = _best_m_for_k(k, theta, det)
        k_hi_seen = k
        if found is not None:
            m, report = found
            if best is None or report.total_power < best[2].total_power:
                best = (m, k, report)
        k += 1

    if best is None:
        raise InfeasibleError(
            "no integer design achieves the rate with finite power")
    m_star, k_star, report = best
    return Optimum(m_star=m_star, k_star=k_star, zeta_star=report.zeta,
                   report=report, detector=det,
                   k_range_searched=(1, k_hi_seen), pruned_at=pruned_at)


def optimal_pair_trace(rates, theta_base: SystemParams, det: Detector, *,
                       k_max: int | None = None) -> list[TracePoint]:
    """Exact optimizer across rate targets, with the relaxation ratio per point.

    The ratio column tracks how tight the continuous relaxation is; it
    approaches 1 as the rate target grows.
    """
    profile = profile_of(theta_base)
    out = []
    for rate in rates:
        theta = profile.at_rate(float(rate))
        opt = optimize_exact(theta, det, k_max=k_max)
        relaxed = minimize_relaxed(
            theta, det, k_max=None if k_max is None else float(k_max))
        out.append(TracePoint(R=float(rate), m_star=opt.m_star,
                              k_star=opt.k_star, zeta_star=opt.zeta_star,
                              zeta_relaxed=relaxed.zeta,
                              ratio=opt.zeta_star / relaxed.zeta))
    return out
