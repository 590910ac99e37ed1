"""Geometry of linearly polarized single photons.

Linear polarization is a *direction*, not a vector: angles are taken
modulo pi and stored in [0, pi). The module provides Malus-law
projections, the anisotropic single-axis attenuation operator used by
the eavesdropping schemes, and projective measurement error
probabilities.

The low-level functions (:func:`angle_gap`, :func:`malus_intensity`,
:func:`dissipation_survival`, :func:`dissipated_direction`,
:func:`flip_probability`) operate on raw radians and accept either
floats or numpy arrays; the typed layer (:class:`PolarizationAngle`,
:func:`dissipate`, ...) wraps them for scalar use. Everything here is a
pure function: no state, safe under any concurrency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

PI = math.pi
HALF_PI = math.pi / 2.0
QUARTER_PI = math.pi / 4.0


def normalize_direction(radians):
    """Reduce an angle to the canonical direction range [0, pi)."""
    ang = np.mod(radians, PI)
    # mod can round up to pi when the argument is a hair below a multiple
    return np.where(ang >= PI, 0.0, ang)


def angle_gap(a, b):
    """Unsigned angle between two directions, in [0, pi/2].

    Directions are identified modulo pi, so the separation between two
    of them can never exceed a right angle.
    """
    d = np.abs(np.asarray(a, dtype=float) - b)
    d = np.mod(d, PI)
    return np.minimum(d, PI - d)


def malus_intensity(state, axis):
    """Intensity fraction transmitted along ``axis``: cos^2 of the gap."""
    return np.cos(angle_gap(state, axis)) ** 2


def dissipation_survival(state, axis, alpha):
    """Survival probability after attenuating the ``axis`` component.

    The amplitude component parallel to the dissipation axis is scaled
    by sqrt(alpha); the orthogonal component passes untouched. The
    surviving intensity fraction is ``alpha*cos^2(psi) + sin^2(psi)``
    with psi the gap between state and axis, computed here in the
    algebraically equal form ``1 - (1-alpha)*cos^2(psi)`` so that
    alpha = 1 yields exactly 1.0.
    """
    return 1.0 - (1.0 - np.asarray(alpha, dtype=float)) * malus_intensity(state, axis)


def dissipated_direction(state, axis, alpha):
    """Polarization direction of the amplitude surviving the attenuation.

    Work in the frame of the dissipation axis: the signed offset of the
    state from the axis, wrapped to [-pi/2, pi/2), has components
    (cos d, sin d); scaling the axis component by sqrt(alpha) rotates
    the direction to atan2(sin d, sqrt(alpha)*cos d). When alpha = 0 and
    the state lies on the axis nothing survives; atan2(0, 0) = 0 then
    returns the input direction, keeping the function total.
    """
    alpha = np.asarray(alpha, dtype=float)
    offset = np.mod(np.asarray(state, dtype=float) - axis + HALF_PI, PI) - HALF_PI
    rotated = np.arctan2(np.sin(offset), np.sqrt(alpha) * np.cos(offset))
    out = normalize_direction(axis + rotated)
    # alpha = 1 is the identity; bypass the trig round trip entirely
    return np.where(alpha == 1.0, normalize_direction(state), out)


def flip_probability(received, intended):
    """Probability a projective measurement maps ``received`` to the state
    orthogonal to ``intended``: sin^2 of their gap."""
    return np.sin(angle_gap(received, intended)) ** 2


@dataclass(frozen=True)
class PolarizationAngle:
    """A linear polarization direction in radians, canonicalized to [0, pi)."""

    radians: float

    def __post_init__(self):
        object.__setattr__(self, "radians", float(normalize_direction(self.radians)))

    @classmethod
    def from_degrees(cls, degrees: float) -> "PolarizationAngle":
        return cls(math.radians(degrees))

    @property
    def degrees(self) -> float:
        return math.degrees(self.radians)


class Basis(Enum):
    """The two conjugate BB84 encoding bases."""

    RECTILINEAR = "rectilinear"
    DIAGONAL = "diagonal"


@dataclass(frozen=True)
class Bb84State:
    """One of the four BB84 signal states."""

    angle: PolarizationAngle
    bit: int
    basis: Basis


STATE_H = Bb84State(PolarizationAngle(0.0), 0, Basis.RECTILINEAR)
STATE_DIAG45 = Bb84State(PolarizationAngle(QUARTER_PI), 0, Basis.DIAGONAL)
STATE_V = Bb84State(PolarizationAngle(HALF_PI), 1, Basis.RECTILINEAR)
STATE_DIAG135 = Bb84State(PolarizationAngle(HALF_PI + QUARTER_PI), 1, Basis.DIAGONAL)

BB84_STATES = (STATE_H, STATE_DIAG45, STATE_V, STATE_DIAG135)


@dataclass(frozen=True)
class DissipationChannel:
    """Per-pulse attenuator: dissipation axis plus intensity survival ratio."""

    axis: PolarizationAngle
    ratio: float

    def __post_init__(self):
        if not 0.0 <= self.ratio <= 1.0:
            raise ValueError(f"dissipation ratio must be in [0, 1], got {self.ratio}")


@dataclass(frozen=True)
class AttenuationOutcome:
    """Result of pushing one photon through a dissipation channel."""

    survival_probability: float
    output_angle: PolarizationAngle


def angle_between(a: PolarizationAngle, b: PolarizationAngle) -> float:
    """Unsigned separation of two polarization directions, in [0, pi/2]."""
    return float(angle_gap(a.radians, b.radians))


def malus_fraction(state: PolarizationAngle, axis: PolarizationAngle) -> float:
    """Intensity fraction of ``state`` passing an analyzer along ``axis``."""
    return float(malus_intensity(state.radians, axis.radians))


def dissipate(state: PolarizationAngle, channel: DissipationChannel) -> AttenuationOutcome:
    """Attenuate the component of ``state`` along the channel axis.

    Returns the photon's survival probability and the direction of the
    renormalized surviving amplitude. For the fully absorbed corner case
    (ratio 0 with the state on the axis) the output angle is defined as
    the input angle; it is never observed since survival is 0.
    """
    survival = float(dissipation_survival(state.radians, channel.axis.radians, channel.ratio))
    out = float(dissipated_direction(state.radians, channel.axis.radians, channel.ratio))
    return AttenuationOutcome(survival, PolarizationAngle(out))


def measurement_error_probability(received: PolarizationAngle, intended: Bb84State) -> float:
    """Probability that measuring ``received`` in the intended state's basis
    yields the opposite bit."""
    return float(flip_probability(received.radians, intended.angle.radians))
