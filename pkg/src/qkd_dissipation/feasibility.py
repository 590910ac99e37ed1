"""Disguise calculus: how much dissipation fits inside a system's budget.

An adversary relaying pulses over a low-loss channel of her own can hide
the attack as long as the error rate and loss she induces match what the
legitimate system already exhibits. Given the system's intrinsic QBER
(and optionally its loss budget in dB), this module computes the largest
usable survival ratio, the fiber-length equivalent of the induced loss,
and the information the adversary gains at that operating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .analytics import (
    AttackScheme,
    adversary_information,
    alpha_from_qber,
    strong_bit_bias,
)

#: standard single-mode fiber attenuation, dB per km
DEFAULT_FIBER_DB_PER_KM = 0.2


@dataclass(frozen=True)
class FeasibilityQuery:
    """System budget the attack must blend into."""

    system_qber: float
    system_loss_db: float | None = None
    fiber_attenuation_db_per_km: float = DEFAULT_FIBER_DB_PER_KM

    def __post_init__(self):
        if not 0.0 < self.system_qber <= 0.25:
            raise ValueError(
                "system_qber must lie in (0, 0.25]: no dissipation ratio can induce "
                f"more than 25% QBER, and 0 leaves nothing to hide behind (got "
                f"{self.system_qber})"
            )
        if self.system_loss_db is not None and self.system_loss_db < 0.0:
            raise ValueError(f"system_loss_db must be >= 0, got {self.system_loss_db}")
        if self.fiber_attenuation_db_per_km <= 0.0:
            raise ValueError(
                f"fiber_attenuation_db_per_km must be > 0, got "
                f"{self.fiber_attenuation_db_per_km}"
            )


@dataclass(frozen=True)
class FeasibilityReport:
    """Operating point of the largest attack hidden by the budget."""

    query: FeasibilityQuery
    alpha_max: float
    mean_transmission: float
    induced_loss_db: float
    equivalent_fiber_km: float
    strong_bias: dict
    adversary_info: dict
    required_superchannel_transmission: float | None
    feasible: bool

    def to_dict(self) -> dict:
        return {
            "system_qber": self.query.system_qber,
            "system_loss_db": self.query.system_loss_db,
            "fiber_attenuation_db_per_km": self.query.fiber_attenuation_db_per_km,
            "alpha_max": self.alpha_max,
            "mean_transmission": self.mean_transmission,
            "induced_loss_db": self.induced_loss_db,
            "equivalent_fiber_km": self.equivalent_fiber_km,
            "strong_bias": dict(self.strong_bias),
            "adversary_info": dict(self.adversary_info),
            "required_superchannel_transmission": self.required_superchannel_transmission,
            "feasible": self.feasible,
        }


def plan(query: FeasibilityQuery) -> FeasibilityReport:
    """Size the largest attack disguisable within the query's budget.

    The survival ratio is pinned by the QBER budget alone; the loss
    budget then decides feasibility by comparing the induced mean loss
    -10*log10((1+alpha)/2) against it. When a loss budget is given, the
    report also carries the transmission the adversary's replacement
    channel must achieve to make the totals match; a value above 1 is
    the infeasibility, stated as a requirement.
    """
    alpha = alpha_from_qber(query.system_qber)
    mean_transmission = (1.0 + alpha) / 2.0
    induced_loss_db = -10.0 * math.log10(mean_transmission)
    equivalent_fiber_km = induced_loss_db / query.fiber_attenuation_db_per_km

    if query.system_loss_db is None:
        required = None
        feasible = True
    else:
        required = 10.0 ** (-(query.system_loss_db - induced_loss_db) / 10.0)
        feasible = induced_loss_db <= query.system_loss_db

    return FeasibilityReport(
        query=query,
        alpha_max=alpha,
        mean_transmission=mean_transmission,
        induced_loss_db=induced_loss_db,
        equivalent_fiber_km=equivalent_fiber_km,
        strong_bias={
            scheme.value: strong_bit_bias(scheme, alpha) for scheme in AttackScheme
        },
        adversary_info={
            scheme.value: adversary_information(scheme, alpha) for scheme in AttackScheme
        },
        required_superchannel_transmission=required,
        feasible=feasible,
    )
