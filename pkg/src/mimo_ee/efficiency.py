"""Energy-efficiency objective and the additive power-budget breakdown.

Total normalized power at a design point splits into four parts: PA draw
of the user terminals, BS antenna hardware, per-user circuitry, and a
residual site overhead. The optimizers compare design points through this
module only, so the decomposition is computed once and carried along.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .link import AntennaConfig, Detector, gamma_required
from .units import SystemParams


class EfficiencyRangeError(ValueError):
    """The efficiency fell outside the representable double range."""


@dataclass(frozen=True)
class EfficiencyReport:
    """Normalized efficiency together with its power budget."""

    zeta: float                 # rate per unit normalized power
    power_pa: float             # alpha * K * gamma
    power_bs_antennas: float    # M * rho_r
    power_user_circuits: float  # K * rho_d
    power_residual: float       # rho_s
    pa_fraction: float          # power_pa / total

    @property
    def total_power(self) -> float:
        return (self.power_pa + self.power_bs_antennas
                + self.power_user_circuits + self.power_residual)


def evaluate_efficiency(cfg: AntennaConfig, theta: SystemParams,
                        det: Detector) -> EfficiencyReport:
    """Evaluate zeta and its budget at a feasible design point.

    A zeta that overflows or lands in the subnormal range is rejected:
    optimizers must never rank design points by garbage values.
    """
    gamma = gamma_required(cfg, theta.R, det)
    power_pa = theta.alpha * cfg.K * gamma
    power_bs = cfg.M * theta.rho_r
    power_users = cfg.K * theta.rho_d
    power_residual = theta.rho_s
    total = power_pa + power_bs + power_users + power_residual
    zeta = theta.R / total
    if not (math.isfinite(zeta) and zeta >= sys.float_info.min):
        raise EfficiencyRangeError(
            f"zeta out of double range at M={cfg.M}, K={cfg.K}: "
            f"total power {total!r}")
    return EfficiencyReport(zeta=zeta, power_pa=power_pa,
                            power_bs_antennas=power_bs,
                            power_user_circuits=power_users,
                            power_residual=power_residual,
                            pa_fraction=power_pa / total)


def pa_power_fraction(cfg: AntennaConfig, theta: SystemParams,
                      det: Detector) -> float:
    """Share of the total power burned in the user terminals' PAs."""
    return evaluate_efficiency(cfg, theta, det).pa_fraction
