"""Independent brute-force oracles shared by the test modules.

Everything here recomputes expected values from first principles
(two-component amplitude vectors, exhaustive enumeration over states and
axes) without touching the closed forms under test.
"""

import math

import numpy as np

from qkd_dissipation.polarization import (
    BB84_STATES,
    DissipationChannel,
    PolarizationAngle,
    dissipate,
    measurement_error_probability,
)


def amplitude_oracle(state: float, axis: float, alpha: float) -> tuple[float, float]:
    """Survival and output direction via explicit lab-frame amplitudes.

    Build the unit amplitude vector of the state, project it onto the
    dissipation axis and its orthogonal complement, scale the axis
    component by sqrt(alpha), and read the surviving vector's norm and
    direction.
    """
    x = np.array([math.cos(state), math.sin(state)])
    u = np.array([math.cos(axis), math.sin(axis)])
    v = np.array([-math.sin(axis), math.cos(axis)])
    w = math.sqrt(alpha) * float(x @ u) * u + float(x @ v) * v
    survival = float(w @ w)
    if survival == 0.0:
        direction = state % math.pi
    else:
        direction = math.atan2(float(w[1]), float(w[0])) % math.pi
        if direction >= math.pi:
            direction = 0.0
    return survival, direction


def enumerate_axis_stats(axis_angle: float, strong_bit: int, alpha: float) -> dict:
    """Exhaustive per-axis statistics over the four BB84 states.

    Treats survival probabilities as arrival weights (uniform priors on
    the states) and projective-measurement error probabilities as error
    weights, yielding the strong/weak arrival intensities, the error
    rate, and the error rates conditioned on the strong/weak bit.
    """
    channel = DissipationChannel(PolarizationAngle(axis_angle), alpha)
    strong_survivals = []
    weak_survivals = []
    err_weighted = 0.0
    total_survival = 0.0
    strong_err_weighted = 0.0
    weak_err_weighted = 0.0
    for state in BB84_STATES:
        outcome = dissipate(state.angle, channel)
        error = measurement_error_probability(outcome.output_angle, state)
        total_survival += outcome.survival_probability
        err_weighted += outcome.survival_probability * error
        if state.bit == strong_bit:
            strong_survivals.append(outcome.survival_probability)
            strong_err_weighted += outcome.survival_probability * error
        else:
            weak_survivals.append(outcome.survival_probability)
            weak_err_weighted += outcome.survival_probability * error
    strong_intensity = sum(strong_survivals) / len(strong_survivals)
    weak_intensity = sum(weak_survivals) / len(weak_survivals)
    return {
        "strong_intensity": strong_intensity,
        "weak_intensity": weak_intensity,
        "strong_bias": strong_intensity / (strong_intensity + weak_intensity),
        "qber": err_weighted / total_survival,
        "qber_strong": strong_err_weighted / sum(strong_survivals),
        "qber_weak": weak_err_weighted / sum(weak_survivals),
    }


def enumerate_scheme_stats(scheme, alpha: float) -> list[dict]:
    """Per-axis statistics for every allowed dissipation axis of a scheme."""
    return [
        enumerate_axis_stats(axis_angle, strong_bit, alpha)
        for axis_angle, strong_bit in scheme.dissipation_axes
    ]
