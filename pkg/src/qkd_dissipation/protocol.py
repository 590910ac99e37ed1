"""Single-photon Monte-Carlo simulation of BB84 under a dissipation attack.

Alice encodes uniform random bits in uniform random bases; the adversary
(optionally) attenuates each pulse along a freshly drawn dissipation
axis; the pulse then survives the system channel with its intrinsic
transmission; Bob measures in a uniform random basis and keeps the
matched-basis arrivals (sifting). Intensity ratios are interpreted as
per-photon survival probabilities throughout, which is what makes the
empirical statistics directly comparable to the closed forms in
:mod:`qkd_dissipation.analytics`.

Reproducibility: pulses are processed in fixed-size shards whose RNGs
are spawned deterministically from ``(seed, shard index)``. Shard counts
are plain integers and their sum is order-independent, so a report is
bit-identical for a given config no matter how many worker threads are
used. The ``QKD_DISSIPATION_THREADS`` environment variable caps worker
threads without affecting results.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analytics import AttackScheme, binary_entropy
from .polarization import (
    HALF_PI,
    QUARTER_PI,
    Basis,
    Bb84State,
    DissipationChannel,
    PolarizationAngle,
    STATE_DIAG45,
    STATE_DIAG135,
    STATE_H,
    STATE_V,
    dissipate,
    dissipated_direction,
    dissipation_survival,
    flip_probability,
)

_ENV_THREADS = "QKD_DISSIPATION_THREADS"

_STATE_BY_BIT_BASIS = {
    (0, Basis.RECTILINEAR): STATE_H,
    (0, Basis.DIAGONAL): STATE_DIAG45,
    (1, Basis.RECTILINEAR): STATE_V,
    (1, Basis.DIAGONAL): STATE_DIAG135,
}


@dataclass(frozen=True)
class ChannelModel:
    """Intrinsic system channel: survival probability and sifted-bit flip rate.

    The defaults model an ideal system (lossless, noiseless, ideal
    detector); noise is applied as an attack-independent bit flip after
    Bob's measurement.
    """

    system_transmission: float = 1.0
    system_qber: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.system_transmission <= 1.0:
            raise ValueError(
                f"system_transmission must be in [0, 1], got {self.system_transmission}"
            )
        if not 0.0 <= self.system_qber <= 0.5:
            raise ValueError(f"system_qber must be in [0, 0.5], got {self.system_qber}")


@dataclass(frozen=True)
class SimulationConfig:
    """Full identity of one simulation run.

    ``scheme`` is None for a no-attack baseline, in which case ``alpha``
    must also be None. The shard size is part of the run's identity: it
    fixes the RNG substreams, so changing it changes the sampled pulses
    (but never the statistics they estimate).
    """

    scheme: AttackScheme | None
    alpha: float | None
    pulses: int
    seed: int
    channel: ChannelModel = field(default_factory=ChannelModel)
    shard_size: int = 250_000

    def __post_init__(self):
        if self.scheme is None:
            if self.alpha is not None:
                raise ValueError("alpha given but no attack scheme selected")
        else:
            if self.alpha is None:
                raise ValueError("alpha is required when an attack scheme is selected")
            if not 0.0 <= self.alpha <= 1.0:
                raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.pulses < 1:
            raise ValueError(f"pulses must be positive, got {self.pulses}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.shard_size < 1:
            raise ValueError(f"shard_size must be positive, got {self.shard_size}")


@dataclass(frozen=True)
class PulseRecord:
    """Everything that happened to a single pulse."""

    alice_bit: int
    alice_basis: Basis
    eve_axis: PolarizationAngle | None
    eve_strong_bit: int | None
    eve_guess: int | None
    arrived: bool
    bob_basis: Basis
    bob_bit: int | None
    sifted: bool


def encode(bit: int, basis: Basis) -> Bb84State:
    """The BB84 state carrying ``bit`` in ``basis``."""
    try:
        return _STATE_BY_BIT_BASIS[(bit, basis)]
    except KeyError:
        raise ValueError(f"no BB84 state for bit={bit!r}, basis={basis!r}") from None


def eve_select(scheme: AttackScheme, rng: np.random.Generator) -> tuple[PolarizationAngle, int]:
    """Draw a dissipation axis uniformly from the scheme's allowed set.

    Returns the axis and the bit value it attenuates most (the strong
    dissipation bit); the adversary will guess the complement.
    """
    axes = scheme.dissipation_axes
    angle, strong_bit = axes[int(rng.integers(0, len(axes)))]
    return PolarizationAngle(angle), strong_bit


def transmit(
    state: Bb84State,
    eve: DissipationChannel | None,
    channel: ChannelModel,
    rng: np.random.Generator,
) -> PolarizationAngle | None:
    """Push one photon through the (optional) attack and the system channel.

    Returns the arriving polarization direction, or None if the photon
    was absorbed at either stage.
    """
    angle = state.angle
    if eve is not None:
        outcome = dissipate(angle, eve)
        if not rng.random() < outcome.survival_probability:
            return None
        angle = outcome.output_angle
    if not rng.random() < channel.system_transmission:
        return None
    return angle


def bob_measure(
    angle: PolarizationAngle,
    basis: Basis,
    channel: ChannelModel,
    rng: np.random.Generator,
) -> int:
    """Projective measurement of an arrived photon in ``basis``.

    Yields bit v with probability cos^2 of the gap to the state encoding
    v, then applies the channel's intrinsic bit-flip noise.
    """
    p_one = float(flip_probability(angle.radians, encode(0, basis).angle.radians))
    bit = 1 if rng.random() < p_one else 0
    if rng.random() < channel.system_qber:
        bit ^= 1
    return bit


def _resolve_workers(max_workers: int | None) -> int:
    requested = 1 if max_workers is None else max_workers
    if requested < 1:
        raise ValueError(f"max_workers must be positive, got {max_workers}")
    raw = os.environ.get(_ENV_THREADS)
    if raw is not None:
        try:
            cap = int(raw)
        except ValueError:
            cap = 0
        if cap < 1:
            raise ValueError(f"{_ENV_THREADS} must be a positive integer, got {raw!r}")
        requested = min(requested, cap)
    return requested


def _shard_plan(config: SimulationConfig) -> list[tuple[np.random.SeedSequence, int]]:
    n_shards = -(-config.pulses // config.shard_size)
    children = np.random.SeedSequence(config.seed).spawn(n_shards)
    plan = []
    remaining = config.pulses
    for child in children:
        count = min(config.shard_size, remaining)
        plan.append((child, count))
        remaining -= count
    return plan


def _shard_arrays(config: SimulationConfig, seed_seq: np.random.SeedSequence, n: int) -> dict:
    """Simulate ``n`` pulses and return the per-pulse arrays.

    RNG draw order is fixed and part of the reproducibility contract:
    alice bits, alice bases, [axis indexes, attack-survival uniforms],
    system-survival uniforms, bob bases, measurement uniforms,
    noise-flip uniforms.
    """
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    channel = config.channel

    bits = rng.integers(0, 2, n, dtype=np.int8)
    bases = rng.integers(0, 2, n, dtype=np.int8)
    angles = bits * HALF_PI + bases * QUARTER_PI

    if config.scheme is not None:
        table = config.scheme.dissipation_axes
        axis_angles = np.array([a for a, _ in table])
        axis_strong = np.array([b for _, b in table], dtype=np.int8)
        axis_idx = rng.integers(0, len(table), n, dtype=np.int8)
        eve_axis = axis_angles[axis_idx]
        strong = axis_strong[axis_idx]
        survival = dissipation_survival(angles, eve_axis, config.alpha)
        passed_attack = rng.random(n) < survival
        received = dissipated_direction(angles, eve_axis, config.alpha)
    else:
        axis_idx = None
        strong = None
        passed_attack = np.ones(n, dtype=bool)
        received = angles

    arrived = passed_attack & (rng.random(n) < channel.system_transmission)

    bob_bases = rng.integers(0, 2, n, dtype=np.int8)
    p_one = flip_probability(received, bob_bases * QUARTER_PI)
    bob_bits = (rng.random(n) < p_one).astype(np.int8)
    bob_bits ^= (rng.random(n) < channel.system_qber).astype(np.int8)

    sifted = arrived & (bases == bob_bases)

    return {
        "bits": bits,
        "bases": bases,
        "axis_idx": axis_idx,
        "strong": strong,
        "arrived": arrived,
        "bob_bases": bob_bases,
        "bob_bits": bob_bits,
        "sifted": sifted,
    }


def _tally(config: SimulationConfig, arrays: dict, n: int) -> dict:
    bits = arrays["bits"]
    sifted = arrays["sifted"]
    bob_bits = arrays["bob_bits"]
    errors = sifted & (bob_bits != bits)
    counts = {
        "pulses": n,
        "arrived": int(np.count_nonzero(arrays["arrived"])),
        "sifted": int(np.count_nonzero(sifted)),
        "errors": int(np.count_nonzero(errors)),
        "alice_ones": int(np.count_nonzero(sifted & (bits == 1))),
        "bob_ones": int(np.count_nonzero(sifted & (bob_bits == 1))),
    }
    if config.scheme is not None:
        strong = arrays["strong"]
        axis_idx = arrays["axis_idx"]
        strong_mask = sifted & (bits == strong)
        counts["strong"] = int(np.count_nonzero(strong_mask))
        counts["bob_strong"] = int(np.count_nonzero(sifted & (bob_bits == strong)))
        counts["error_strong"] = int(np.count_nonzero(errors & strong_mask))
        n_axes = len(config.scheme.dissipation_axes)
        counts["axis_sifted"] = np.array(
            [np.count_nonzero(sifted & (axis_idx == k)) for k in range(n_axes)]
        )
        counts["axis_errors"] = np.array(
            [np.count_nonzero(errors & (axis_idx == k)) for k in range(n_axes)]
        )
        counts["axis_strong"] = np.array(
            [np.count_nonzero(strong_mask & (axis_idx == k)) for k in range(n_axes)]
        )
    return counts


def _simulate_shard(config: SimulationConfig, seed_seq: np.random.SeedSequence, n: int) -> dict:
    return _tally(config, _shard_arrays(config, seed_seq, n), n)


def _proportion(numerator: int | None, denominator: int | None):
    if numerator is None or not denominator:
        return None
    return numerator / denominator


def _proportion_se(p: float | None, n: int | None):
    if p is None or not n:
        return None
    return (p * (1.0 - p) / n) ** 0.5


@dataclass(frozen=True)
class SimulationReport:
    """Aggregated counts of one run plus the derived empirical estimates."""

    config: SimulationConfig
    pulses_sent: int
    arrived_count: int
    sifted_count: int
    error_count: int
    alice_ones_count: int
    bob_ones_count: int
    strong_count: int | None = None
    eve_correct_count: int | None = None
    bob_strong_count: int | None = None
    error_strong_count: int | None = None
    error_weak_count: int | None = None
    axis_sifted: tuple[int, ...] | None = None
    axis_errors: tuple[int, ...] | None = None
    axis_strong: tuple[int, ...] | None = None

    # -- derived estimates ------------------------------------------------

    @property
    def transmission_hat(self):
        return _proportion(self.arrived_count, self.pulses_sent)

    @property
    def transmission_se(self):
        return _proportion_se(self.transmission_hat, self.pulses_sent)

    @property
    def sift_rate_hat(self):
        return _proportion(self.sifted_count, self.arrived_count)

    @property
    def sift_rate_se(self):
        return _proportion_se(self.sift_rate_hat, self.arrived_count)

    @property
    def qber_hat(self):
        return _proportion(self.error_count, self.sifted_count)

    @property
    def qber_se(self):
        return _proportion_se(self.qber_hat, self.sifted_count)

    @property
    def strong_bias_hat(self):
        return _proportion(self.strong_count, self.sifted_count)

    @property
    def strong_bias_se(self):
        return _proportion_se(self.strong_bias_hat, self.sifted_count)

    @property
    def eve_accuracy_hat(self):
        return _proportion(self.eve_correct_count, self.sifted_count)

    @property
    def eve_accuracy_se(self):
        return _proportion_se(self.eve_accuracy_hat, self.sifted_count)

    @property
    def eve_info_hat(self):
        p = self.strong_bias_hat
        return None if p is None else 1.0 - binary_entropy(p)

    @property
    def eve_info_se(self):
        # delta method: d(1-H(p))/dp = log2((1-p)/p)
        p = self.strong_bias_hat
        se = self.strong_bias_se
        if p is None or se is None or p in (0.0, 1.0):
            return None
        return abs(math.log2((1.0 - p) / p)) * se

    @property
    def alice_ones_fraction(self):
        return _proportion(self.alice_ones_count, self.sifted_count)

    @property
    def bob_ones_fraction(self):
        return _proportion(self.bob_ones_count, self.sifted_count)

    @property
    def weak_count(self):
        if self.strong_count is None:
            return None
        return self.sifted_count - self.strong_count

    @property
    def qber_strong_hat(self):
        return _proportion(self.error_strong_count, self.strong_count)

    @property
    def qber_weak_hat(self):
        return _proportion(self.error_weak_count, self.weak_count)

    def to_dict(self) -> dict:
        """Counts and estimates as JSON-ready plain types."""
        counts = {
            "pulses_sent": self.pulses_sent,
            "arrived": self.arrived_count,
            "sifted": self.sifted_count,
            "errors": self.error_count,
            "alice_ones": self.alice_ones_count,
            "bob_ones": self.bob_ones_count,
            "strong": self.strong_count,
            "eve_correct": self.eve_correct_count,
            "bob_strong": self.bob_strong_count,
            "error_strong": self.error_strong_count,
            "error_weak": self.error_weak_count,
        }
        if self.axis_sifted is not None:
            counts["per_axis"] = [
                {
                    "axis": k,
                    "strong_bit": self.config.scheme.dissipation_axes[k][1],
                    "sifted": self.axis_sifted[k],
                    "errors": self.axis_errors[k],
                    "strong": self.axis_strong[k],
                }
                for k in range(len(self.axis_sifted))
            ]
        estimates = {
            "transmission_hat": self.transmission_hat,
            "transmission_se": self.transmission_se,
            "sift_rate_hat": self.sift_rate_hat,
            "sift_rate_se": self.sift_rate_se,
            "qber_hat": self.qber_hat,
            "qber_se": self.qber_se,
            "strong_bias_hat": self.strong_bias_hat,
            "strong_bias_se": self.strong_bias_se,
            "eve_accuracy_hat": self.eve_accuracy_hat,
            "eve_accuracy_se": self.eve_accuracy_se,
            "eve_info_hat": self.eve_info_hat,
            "eve_info_se": self.eve_info_se,
            "alice_ones_fraction": self.alice_ones_fraction,
            "bob_ones_fraction": self.bob_ones_fraction,
            "qber_strong_hat": self.qber_strong_hat,
            "qber_weak_hat": self.qber_weak_hat,
        }
        return {"counts": counts, "estimates": estimates}


def run_simulation(config: SimulationConfig, max_workers: int | None = None) -> SimulationReport:
    """Run the full protocol and aggregate a :class:`SimulationReport`.

    Deterministic for a fixed config: shard RNGs are spawned from the
    seed, and integer shard counts are summed, so the report does not
    depend on ``max_workers`` or thread scheduling.
    """
    workers = _resolve_workers(max_workers)
    plan = _shard_plan(config)
    if workers == 1 or len(plan) == 1:
        shard_counts = [_simulate_shard(config, child, count) for child, count in plan]
    else:
        with ThreadPoolExecutor(max_workers=min(workers, len(plan))) as pool:
            shard_counts = list(
                pool.map(lambda item: _simulate_shard(config, item[0], item[1]), plan)
            )

    totals: dict = {}
    for counts in shard_counts:
        for key, value in counts.items():
            totals[key] = totals.get(key, 0) + value

    attacking = config.scheme is not None
    strong = totals.get("strong")
    return SimulationReport(
        config=config,
        pulses_sent=totals["pulses"],
        arrived_count=totals["arrived"],
        sifted_count=totals["sifted"],
        error_count=totals["errors"],
        alice_ones_count=totals["alice_ones"],
        bob_ones_count=totals["bob_ones"],
        strong_count=strong,
        eve_correct_count=(totals["sifted"] - strong) if attacking else None,
        bob_strong_count=totals.get("bob_strong"),
        error_strong_count=totals.get("error_strong"),
        error_weak_count=(totals["errors"] - totals["error_strong"]) if attacking else None,
        axis_sifted=tuple(int(x) for x in totals["axis_sifted"]) if attacking else None,
        axis_errors=tuple(int(x) for x in totals["axis_errors"]) if attacking else None,
        axis_strong=tuple(int(x) for x in totals["axis_strong"]) if attacking else None,
    )


def trace_pulses(config: SimulationConfig, limit: int | None = None) -> list[PulseRecord]:
    """Materialize per-pulse records for the first ``limit`` pulses.

    Uses the exact same shard computation as :func:`run_simulation`, so
    a trace is a faithful prefix view of the corresponding run.
    """
    wanted = config.pulses if limit is None else min(limit, config.pulses)
    records: list[PulseRecord] = []
    for child, count in _shard_plan(config):
        if len(records) >= wanted:
            break
        arrays = _shard_arrays(config, child, count)
        take = min(count, wanted - len(records))
        for i in range(take):
            attacking = config.scheme is not None
            arrived = bool(arrays["arrived"][i])
            if attacking:
                table = config.scheme.dissipation_axes
                axis_angle, strong_bit = table[int(arrays["axis_idx"][i])]
                eve_axis = PolarizationAngle(axis_angle)
                eve_guess = 1 - strong_bit
            else:
                eve_axis = None
                strong_bit = None
                eve_guess = None
            records.append(
                PulseRecord(
                    alice_bit=int(arrays["bits"][i]),
                    alice_basis=Basis.DIAGONAL if arrays["bases"][i] else Basis.RECTILINEAR,
                    eve_axis=eve_axis,
                    eve_strong_bit=strong_bit,
                    eve_guess=eve_guess,
                    arrived=arrived,
                    bob_basis=Basis.DIAGONAL if arrays["bob_bases"][i] else Basis.RECTILINEAR,
                    bob_bit=int(arrays["bob_bits"][i]) if arrived else None,
                    sifted=bool(arrays["sifted"][i]),
                )
            )
    return records
