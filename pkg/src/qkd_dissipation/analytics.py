"""Closed-form predictions for the randomly oriented dissipation attack.

Two attack variants are modeled. In both, the adversary picks a
dissipation axis per pulse, uniformly at random from a fixed set, and
attenuates the intensity component along it to a fraction ``alpha``:

* four-state: the axis set is the four BB84 signal directions, so one
  bit value per pulse is hit hard (the "strong dissipation" bit) while
  the other is hit only through its diagonal components;
* Breidbart: the axis set is the two intermediate directions pi/8 and
  5*pi/8, each sitting pi/8 away from both encoding states of one bit
  value.

Arrival statistics then bias the sifted key against the strong bit,
which is what the adversary reads out. This module provides the
resulting intensities, bit bias, error rate, the inversions used to
size an attack from observed quantities, and the adversary's
information per sifted key bit. All functions are pure and operate on
plain floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .polarization import HALF_PI, QUARTER_PI

SQRT2 = math.sqrt(2.0)
LN2 = math.log(2.0)

# cos^2(pi/8) and sin^2(pi/8): projections of the BB84 states onto a
# Breidbart axis
COS2_PI_8 = (2.0 + SQRT2) / 4.0
SIN2_PI_8 = (2.0 - SQRT2) / 4.0

#: absolute slack for clamping float inputs onto closed interval endpoints
EDGE_TOL = 1e-12


class AttackScheme(Enum):
    """Which axis set the adversary draws her dissipation direction from."""

    FOUR_STATE = "four-state"
    BREIDBART = "breidbart"

    @property
    def dissipation_axes(self) -> tuple[tuple[float, int], ...]:
        """Allowed (axis angle, strong-dissipation bit) pairs.

        Each axis attenuates one bit value's encodings most; that value
        is the strong bit for pulses attacked along the axis.
        """
        if self is AttackScheme.FOUR_STATE:
            return (
                (0.0, 0),
                (QUARTER_PI, 0),
                (HALF_PI, 1),
                (HALF_PI + QUARTER_PI, 1),
            )
        return ((QUARTER_PI / 2.0, 0), (HALF_PI + QUARTER_PI / 2.0, 1))

    @property
    def bias_coefficient(self) -> float:
        """Coefficient c in the strong-bit bias 1/2 - c*(1-alpha)/(1+alpha)."""
        return 0.25 if self is AttackScheme.FOUR_STATE else SQRT2 / 4.0

    @property
    def bias_bounds(self) -> tuple[float, float]:
        """Extreme values of the (strong, weak) bias pair at alpha = 0.

        The strong-bit bias itself occupies [lower, 1/2]; the weak bias
        mirrors it in [1/2, upper]. Both endpoints enter the closed-form
        error-rate expression in :func:`qber_from_bias`.
        """
        c = self.bias_coefficient
        return (0.5 - c, 0.5 + c)

    @property
    def ratio_limit(self) -> float:
        """Limit of information/QBER as the attack switches off (alpha -> 1)."""
        return 1.0 / LN2 if self is AttackScheme.FOUR_STATE else 2.0 / LN2


def _checked_alpha(alpha: float) -> float:
    """Validate a survival ratio, clamping float dust at the endpoints."""
    if alpha < 0.0:
        if alpha >= -EDGE_TOL:
            return 0.0
        raise ValueError(f"survival ratio alpha must be in [0, 1], got {alpha}")
    if alpha > 1.0:
        if alpha <= 1.0 + EDGE_TOL:
            return 1.0
        raise ValueError(f"survival ratio alpha must be in [0, 1], got {alpha}")
    return float(alpha)


def _checked_interval(value: float, lo: float, hi: float, name: str) -> float:
    if value < lo:
        if value >= lo - EDGE_TOL:
            return lo
        raise ValueError(f"{name} must be in [{lo}, {hi}], got {value}")
    if value > hi:
        if value <= hi + EDGE_TOL:
            return hi
        raise ValueError(f"{name} must be in [{lo}, {hi}], got {value}")
    return float(value)


def intensities(scheme: AttackScheme, alpha: float) -> tuple[float, float, float]:
    """Arrival intensities (strong bit, weak bit, mean), in units of the
    undisturbed pulse intensity.

    Four-state: ((1+3a)/4, (3+a)/4); Breidbart: (a*cos^2(pi/8)+sin^2(pi/8),
    a*sin^2(pi/8)+cos^2(pi/8)). The mean is (1+a)/2 for both.
    """
    alpha = _checked_alpha(alpha)
    if scheme is AttackScheme.FOUR_STATE:
        strong = (1.0 + 3.0 * alpha) / 4.0
        weak = (3.0 + alpha) / 4.0
    else:
        strong = alpha * COS2_PI_8 + SIN2_PI_8
        weak = alpha * SIN2_PI_8 + COS2_PI_8
    return strong, weak, (1.0 + alpha) / 2.0


def strong_bit_bias(scheme: AttackScheme, alpha: float) -> float:
    """Probability that an arriving (sifted) key bit is the strong bit.

    Equals I_strong / (I_strong + I_weak) = 1/2 - c*(1-alpha)/(1+alpha)
    with c the scheme's bias coefficient.
    """
    alpha = _checked_alpha(alpha)
    return 0.5 - scheme.bias_coefficient * (1.0 - alpha) / (1.0 + alpha)


def qber(alpha: float) -> float:
    """Error rate induced among sifted bits; identical for both schemes.

    (1/4) * (1-alpha)/(1+alpha) * (1-sqrt(alpha))/(1+sqrt(alpha)),
    which equals (1-sqrt(alpha))^2 / (4*(1+alpha)). Ranges from 1/4 at
    alpha=0 down to 0 at alpha=1.
    """
    alpha = _checked_alpha(alpha)
    s = math.sqrt(alpha)
    return 0.25 * (1.0 - alpha) / (1.0 + alpha) * (1.0 - s) / (1.0 + s)


def breidbart_conditional_qber(alpha: float) -> tuple[float, float]:
    """Error rates of strong- and weak-bit pulses under a Breidbart axis.

    Every state sits pi/8 or 3*pi/8 from the axis, so all four acquire
    errors; the strong-bit states are rotated further. With s=sqrt(alpha):

      eta_strong = (1-s)^2 / ((sqrt2-1 + (sqrt2+1)*s)^2 + (1-s)^2)
      eta_weak   = (1-s)^2 / ((sqrt2+1 + (sqrt2-1)*s)^2 + (1-s)^2)

    Their *intensity-weighted* mean reproduces :func:`qber`.
    """
    alpha = _checked_alpha(alpha)
    s = math.sqrt(alpha)
    shrink = (1.0 - s) ** 2
    eta_strong = shrink / ((SQRT2 - 1.0 + (SQRT2 + 1.0) * s) ** 2 + shrink)
    eta_weak = shrink / ((SQRT2 + 1.0 + (SQRT2 - 1.0) * s) ** 2 + shrink)
    return eta_strong, eta_weak


def alpha_from_bias(scheme: AttackScheme, p_b: float) -> float:
    """Survival ratio producing a given strong-bit bias (inverse of
    :func:`strong_bit_bias`)."""
    lo, _ = scheme.bias_bounds
    p_b = _checked_interval(p_b, lo, 0.5, "strong-bit bias")
    if scheme is AttackScheme.FOUR_STATE:
        alpha = (4.0 * p_b - 1.0) / (3.0 - 4.0 * p_b)
    else:
        dev = SQRT2 * (1.0 - 2.0 * p_b)
        alpha = (1.0 - dev) / (1.0 + dev)
    # endpoint inputs can leave a few ulp of dust outside [0, 1]
    return _checked_alpha(alpha)


def qber_from_bias(scheme: AttackScheme, p_b: float) -> float:
    """Error rate written directly as a function of the strong-bit bias.

    Four-state: (1/2) * (sqrt(3/4 - p) - sqrt(p - 1/4))^2
    Breidbart: (sqrt2/4) * (sqrt((2+sqrt2)/4 - p) - sqrt(p - (2-sqrt2)/4))^2
    """
    lo, hi = scheme.bias_bounds
    p_b = _checked_interval(p_b, lo, 0.5, "strong-bit bias")
    root = math.sqrt(hi - p_b) - math.sqrt(p_b - lo)
    if scheme is AttackScheme.FOUR_STATE:
        return 0.5 * root**2
    return SQRT2 / 4.0 * root**2


def alpha_from_qber(eta: float) -> float:
    """Survival ratio producing a given induced error rate.

    Solves (1-s)^2 = 4*eta*(1+s^2) for s = sqrt(alpha) in [0, 1] via the
    cancellation-free root s = (1-4*eta) / (1 + sqrt(8*eta*(1-2*eta))),
    valid on the whole range eta in [0, 1/4]. No survival ratio can push
    the error rate above 1/4.
    """
    eta = _checked_interval(eta, 0.0, 0.25, "induced error rate")
    s = (1.0 - 4.0 * eta) / (1.0 + math.sqrt(8.0 * eta * (1.0 - 2.0 * eta)))
    return s * s


def binary_entropy(p: float) -> float:
    """Binary entropy -p*log2(p) - (1-p)*log2(1-p) in bits, with
    0*log2(0) taken as 0."""
    p = _checked_interval(p, 0.0, 1.0, "probability")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def adversary_information(scheme: AttackScheme, alpha: float) -> float:
    """Adversary's information per sifted key bit: 1 - H(strong-bit bias)."""
    return 1.0 - binary_entropy(strong_bit_bias(scheme, alpha))


#: survival ratios closer to 1 than this return the analytic ratio limit
_RATIO_LIMIT_EDGE = 1e-6


def info_qber_ratio(scheme: AttackScheme, alpha: float) -> float:
    """Adversary information divided by induced error rate.

    Both quantities vanish as alpha -> 1; the ratio approaches 1/ln(2)
    (four-state) or 2/ln(2) (Breidbart) from below, so ratios within
    ``_RATIO_LIMIT_EDGE`` of alpha = 1 return the limit instead of the
    numerically hollowed-out quotient.
    """
    alpha = _checked_alpha(alpha)
    if alpha > 1.0 - _RATIO_LIMIT_EDGE:
        return scheme.ratio_limit
    return adversary_information(scheme, alpha) / qber(alpha)


@dataclass(frozen=True)
class AnalyticProfile:
    """Every closed-form quantity for one (scheme, alpha) pair."""

    scheme: AttackScheme
    alpha: float
    strong_intensity: float
    weak_intensity: float
    mean_intensity: float
    strong_bias: float
    weak_bias: float
    qber: float
    adversary_info: float
    info_qber_ratio: float

    def to_dict(self) -> dict:
        """Keys follow the CSV column names used by the CLI."""
        return {
            "alpha": self.alpha,
            "scheme": self.scheme.value,
            "i_strong": self.strong_intensity,
            "i_weak": self.weak_intensity,
            "i_mean": self.mean_intensity,
            "p_b": self.strong_bias,
            "p_bbar": self.weak_bias,
            "qber": self.qber,
            "eve_info": self.adversary_info,
            "info_qber_ratio": self.info_qber_ratio,
        }


def profile(scheme: AttackScheme, alpha: float) -> AnalyticProfile:
    """Bundle all closed forms for one (scheme, alpha) pair."""
    alpha = _checked_alpha(alpha)
    strong_i, weak_i, mean_i = intensities(scheme, alpha)
    bias = strong_bit_bias(scheme, alpha)
    return AnalyticProfile(
        scheme=scheme,
        alpha=alpha,
        strong_intensity=strong_i,
        weak_intensity=weak_i,
        mean_intensity=mean_i,
        strong_bias=bias,
        weak_bias=1.0 - bias,
        qber=qber(alpha),
        adversary_info=adversary_information(scheme, alpha),
        info_qber_ratio=info_qber_ratio(scheme, alpha),
    )
