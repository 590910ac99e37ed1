"""Randomly oriented dissipation eavesdropping on BB84.

Closed-form attack analytics, an independent single-photon Monte-Carlo
simulation of the protocol, and a feasibility planner for hiding the
attack inside a real system's loss and error budget.
"""

from .analytics import (
    AnalyticProfile,
    AttackScheme,
    adversary_information,
    alpha_from_bias,
    alpha_from_qber,
    binary_entropy,
    breidbart_conditional_qber,
    info_qber_ratio,
    intensities,
    profile,
    qber,
    qber_from_bias,
    strong_bit_bias,
)
from .feasibility import FeasibilityQuery, FeasibilityReport, plan
from .polarization import (
    AttenuationOutcome,
    BB84_STATES,
    Basis,
    Bb84State,
    DissipationChannel,
    PolarizationAngle,
    STATE_DIAG45,
    STATE_DIAG135,
    STATE_H,
    STATE_V,
    angle_between,
    dissipate,
    malus_fraction,
    measurement_error_probability,
)
from .protocol import (
    ChannelModel,
    PulseRecord,
    SimulationConfig,
    SimulationReport,
    bob_measure,
    encode,
    eve_select,
    run_simulation,
    trace_pulses,
    transmit,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticProfile",
    "AttackScheme",
    "AttenuationOutcome",
    "BB84_STATES",
    "Basis",
    "Bb84State",
    "ChannelModel",
    "DissipationChannel",
    "FeasibilityQuery",
    "FeasibilityReport",
    "PolarizationAngle",
    "PulseRecord",
    "STATE_DIAG45",
    "STATE_DIAG135",
    "STATE_H",
    "STATE_V",
    "SimulationConfig",
    "SimulationReport",
    "adversary_information",
    "alpha_from_bias",
    "alpha_from_qber",
    "angle_between",
    "binary_entropy",
    "bob_measure",
    "breidbart_conditional_qber",
    "dissipate",
    "encode",
    "eve_select",
    "info_qber_ratio",
    "intensities",
    "malus_fraction",
    "measurement_error_probability",
    "plan",
    "profile",
    "qber",
    "qber_from_bias",
    "run_simulation",
    "strong_bit_bias",
    "trace_pulses",
    "transmit",
]
