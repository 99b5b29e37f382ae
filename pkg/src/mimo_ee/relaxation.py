"""Continuous relaxation of the (M, K) design problem.

For a fixed real user count k the optimal antenna count has a closed form,
which collapses the design problem to a one-dimensional minimization over
k. That reduced objective is not known to be unimodal, so the solver runs
a dense logarithmic grid first and then refines the winning bracket by
golden-section search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .link import Detector, InfeasibleError, exp2_sat
from .units import SystemParams

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0   # 1/phi
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2

DEFAULT_GRID_POINTS = 4096
DEFAULT_REL_TOL = 1e-9


@dataclass(frozen=True)
class SolverDiag:
    """Where the 1-D solver looked and how hard it refined."""

    grid_points: int
    refine_iters: int
    bracket: tuple[float, float]


@dataclass(frozen=True)
class RelaxedOptimum:
    k_star: float       # real user count at the minimum
    m_star: float       # matching closed-form antenna count
    zeta: float         # relaxed efficiency R / objective
    objective: float    # total normalized power at (m_star, k_star)
    detector: Detector
    solver_diag: SolverDiag


def _require_rho_r(theta: SystemParams) -> None:
    if theta.rho_r <= 0:
        raise ValueError(
            "rho_r must be > 0: with free BS antennas the optimal M is unbounded")


def _require_k(k: float) -> None:
    if not (math.isfinite(k) and k >= 1):
        raise ValueError(f"k must be finite and >= 1, got {k!r}")


def min_pa_antenna_power(k: float, theta: SystemParams) -> float:
    """Smallest combined PA and antenna-hardware power at user count k.

    This is the AM-GM value of t*rho_r + alpha*k*(2^(R/k)-1)/t over the
    free antenna surplus t > 0, attained at t = sqrt(alpha*k*(2^(R/k)-1)/rho_r).
    """
    _require_rho_r(theta)
    _require_k(k)
    e = exp2_sat(theta.R / k) - 1.0
    return 2.0 * math.sqrt(theta.alpha * theta.rho_r * k * e)


def _objective_grid(k: np.ndarray, theta: SystemParams,
                    det: Detector) -> np.ndarray:
    """Reduced power objective on an array of k values; overflow maps to +inf."""
    with np.errstate(over="ignore", invalid="ignore"):
        e = np.exp2(theta.R / k) - 1.0
        h = 2.0 * np.sqrt(theta.alpha * theta.rho_r * k * e)
        if det is Detector.MRC:
            # k=1 must give exactly zero even when e has overflowed to inf
            extra = np.where(k > 1.0, (k - 1.0) * e, 0.0)
            total = (h + theta.rho_r + theta.rho_s + k * theta.rho_d
                     + theta.rho_r * extra)
        else:
            total = h + k * (theta.rho_r + theta.rho_d) + theta.rho_s
    return np.where(np.isfinite(total), total, np.inf)


def reduced_power(k: float, theta: SystemParams, det: Detector) -> float:
    """Total normalized power at user count k with the antenna count optimized out.

    Returns +inf where the per-user rate 2^(R/k) overflows; such points are
    never minima because a larger k always brings the power back to finite.
    """
    _require_rho_r(theta)
    _require_k(k)
    return float(_objective_grid(np.float64(k), theta, det))


def optimal_m(theta: SystemParams, k: float, det: Detector) -> float:
    """Closed-form antenna count minimizing the power at fixed user count k."""
    _require_rho_r(theta)
    _require_k(k)
    e = exp2_sat(theta.R / k) - 1.0
    surplus = math.sqrt(theta.alpha * k * e / theta.rho_r)
    if det is Detector.ZF:
        return k + surplus
    return 1.0 + (0.0 if k == 1 else (k - 1.0) * e) + surplus


def _golden_refine(f, lo: float, hi: float, rel_tol: float) -> tuple[float, int]:
    """Golden-section minimization of f on [lo, hi]; ties drift to smaller k."""
    width = hi - lo
    tol = rel_tol * max(1.0, abs(hi))
    if width <= tol:
        return (lo + hi) / 2.0, 0
    steps = int(math.ceil(math.log(tol / width) / math.log(_INVPHI)))
    a, b = lo, hi
    c = a + _INVPHI2 * width
    d = a + _INVPHI * width
    yc = f(c)
    yd = f(d)
    for _ in range(steps):
        if yc <= yd:
            b, d, yd = d, c, yc
            c = a + _INVPHI2 * (b - a)
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            d = a + _INVPHI * (b - a)
            yd = f(d)
    return (a + b) / 2.0, steps


def minimize_relaxed(theta: SystemParams, det: Detector, *,
                     k_max: float | None = None,
                     grid_points: int = DEFAULT_GRID_POINTS,
                     rel_tol: float = DEFAULT_REL_TOL) -> RelaxedOptimum:
    """Minimize the reduced power objective over real k in [1, k_max].

    When k_max is not given it is derived from an incumbent evaluation:
    any k with k*rho_d above the incumbent objective cannot win, which
    turns the unbounded domain into a provably sufficient interval. That
    construction needs rho_d > 0; otherwise the caller must cap k itself.
    """
    _require_rho_r(theta)
    if k_max is None:
        if theta.rho_d <= 0:
            raise ValueError(
                "optimum may lie at k -> inf: supply k_max or a positive rho_d")
        # seed point with per-user rate <= 2 bits/s/Hz, always finite power
        k_seed = max(1.0, theta.R / 2.0)
        incumbent = reduced_power(k_seed, theta, det)
        k_cap = max(k_seed, math.ceil(incumbent / theta.rho_d))
    else:
        if not (math.isfinite(k_max) and k_max >= 1):
            raise ValueError(f"k_max must be finite and >= 1, got {k_max!r}")
        k_cap = float(k_max)

    if k_cap == 1.0:
        objective = reduced_power(1.0, theta, det)
        if not math.isfinite(objective):
            raise InfeasibleError("power overflows double range at k = 1")
        return RelaxedOptimum(
            k_star=1.0, m_star=optimal_m(theta, 1.0, det),
            zeta=theta.R / objective, objective=objective, detector=det,
            solver_diag=SolverDiag(grid_points=1, refine_iters=0,
                                   bracket=(1.0, 1.0)))

    grid = np.geomspace(1.0, k_cap, grid_points)
    values = _objective_grid(grid, theta, det)
    best = int(np.argmin(values))  # first minimum wins, i.e. smaller k on ties
    if not math.isfinite(values[best]):
        raise InfeasibleError(
            "power overflows double range over the whole k grid")

    lo = float(grid[max(best - 1, 0)])
    hi = float(grid[min(best + 1, len(grid) - 1)])
    k_refined, iters = _golden_refine(
        lambda k: reduced_power(k, theta, det), lo, hi, rel_tol)

    # keep whichever of the grid point and the refined point is lower;
    # on a tie the smaller k wins for deterministic output
    candidates = sorted({float(grid[best]), k_refined})
    k_star = min(candidates, key=lambda k: (reduced_power(k, theta, det), k))
    objective = reduced_power(k_star, theta, det)
    return RelaxedOptimum(
        k_star=k_star, m_star=optimal_m(theta, k_star, det),
        zeta=theta.R / objective, objective=objective, detector=det,
        solver_diag=SolverDiag(grid_points=grid_points, refine_iters=iters,
                               bracket=(lo, hi)))
