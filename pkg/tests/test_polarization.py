import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkd_dissipation.polarization import (
    BB84_STATES,
    Basis,
    DissipationChannel,
    PolarizationAngle,
    STATE_DIAG45,
    STATE_DIAG135,
    STATE_H,
    STATE_V,
    angle_between,
    angle_gap,
    dissipate,
    malus_fraction,
    measurement_error_probability,
)

from oracles import amplitude_oracle

PI = math.pi

angles = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
ratios = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)

ANGLE_GRID = [0.0, PI / 8, PI / 4, 3 * PI / 8, PI / 2, 5 * PI / 8, 3 * PI / 4, 7 * PI / 8, 0.1, 1.0, 2.5]
ALPHA_GRID = [0.0, 1e-6, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0 - 1e-9, 1.0]


def test_angle_is_canonicalized():
    assert PolarizationAngle(PI).radians == 0.0
    assert PolarizationAngle(-0.25).radians == pytest.approx(PI - 0.25, abs=1e-12)
    assert PolarizationAngle(3 * PI + 0.5).radians == pytest.approx(0.5, abs=1e-12)


@given(angles)
def test_angle_always_in_range(theta):
    normalized = PolarizationAngle(theta).radians
    assert 0.0 <= normalized < PI


def test_bb84_state_constants():
    assert len(BB84_STATES) == 4
    assert (STATE_H.angle.radians, STATE_H.bit, STATE_H.basis) == (0.0, 0, Basis.RECTILINEAR)
    assert STATE_DIAG45.angle.radians == pytest.approx(PI / 4, abs=1e-15)
    assert (STATE_DIAG45.bit, STATE_DIAG45.basis) == (0, Basis.DIAGONAL)
    assert STATE_V.angle.radians == pytest.approx(PI / 2, abs=1e-15)
    assert (STATE_V.bit, STATE_V.basis) == (1, Basis.RECTILINEAR)
    assert STATE_DIAG135.angle.radians == pytest.approx(3 * PI / 4, abs=1e-15)
    assert (STATE_DIAG135.bit, STATE_DIAG135.basis) == (1, Basis.DIAGONAL)


def test_angle_between_examples():
    assert angle_between(PolarizationAngle(0.0), PolarizationAngle(PI / 2)) == pytest.approx(
        PI / 2, abs=1e-12
    )
    # V and the 135-degree state both sit pi/8 from the upper Breidbart axis
    assert angle_between(PolarizationAngle(PI / 2), PolarizationAngle(5 * PI / 8)) == pytest.approx(
        PI / 8, abs=1e-12
    )
    assert angle_between(
        PolarizationAngle(3 * PI / 4), PolarizationAngle(5 * PI / 8)
    ) == pytest.approx(PI / 8, abs=1e-12)


@given(angles, angles)
def test_angle_between_symmetric_and_bounded(a, b):
    pa, pb = PolarizationAngle(a), PolarizationAngle(b)
    gap = angle_between(pa, pb)
    assert 0.0 <= gap <= PI / 2 + 1e-15
    assert gap == angle_between(pb, pa)


def test_malus_examples():
    assert malus_fraction(PolarizationAngle(0.0), PolarizationAngle(0.0)) == pytest.approx(1.0)
    assert malus_fraction(
        PolarizationAngle.from_degrees(45), PolarizationAngle(0.0)
    ) == pytest.approx(0.5, abs=1e-12)
    # cos^2(22.5 deg) = (2 + sqrt 2) / 4
    assert malus_fraction(
        PolarizationAngle.from_degrees(90), PolarizationAngle.from_degrees(112.5)
    ) == pytest.approx(0.8535533905932737, abs=1e-12)


def test_dissipate_diagonal_into_vertical_axis():
    out = dissipate(
        PolarizationAngle.from_degrees(45),
        DissipationChannel(PolarizationAngle.from_degrees(90), 0.25),
    )
    assert out.survival_probability == pytest.approx(0.625, abs=1e-12)
    assert out.output_angle.radians == pytest.approx(math.atan(0.5), abs=1e-12)


def test_dissipate_aligned_state():
    out = dissipate(
        PolarizationAngle.from_degrees(90),
        DissipationChannel(PolarizationAngle.from_degrees(90), 0.25),
    )
    assert out.survival_probability == pytest.approx(0.25, abs=1e-12)
    assert out.output_angle.radians == pytest.approx(PI / 2, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.9, 1.0])
def test_dissipate_orthogonal_state_untouched(alpha):
    out = dissipate(
        PolarizationAngle(0.0),
        DissipationChannel(PolarizationAngle.from_degrees(90), alpha),
    )
    assert out.survival_probability == pytest.approx(1.0, abs=1e-12)
    assert out.output_angle.radians == pytest.approx(0.0, abs=1e-12)


def test_dissipate_vertical_into_breidbart_axis():
    out = dissipate(
        PolarizationAngle.from_degrees(90),
        DissipationChannel(PolarizationAngle.from_degrees(112.5), 0.25),
    )
    assert out.survival_probability == pytest.approx(0.35983495705504467, abs=1e-12)
    assert out.output_angle.degrees == pytest.approx(72.86072776224387, abs=1e-9)


def test_dissipate_total_absorption_keeps_input_angle():
    out = dissipate(
        PolarizationAngle.from_degrees(90),
        DissipationChannel(PolarizationAngle.from_degrees(90), 0.0),
    )
    assert out.survival_probability == 0.0
    assert out.output_angle.radians == pytest.approx(PI / 2, abs=1e-12)


@pytest.mark.parametrize("state", ANGLE_GRID)
@pytest.mark.parametrize("axis", ANGLE_GRID)
def test_dissipate_alpha_one_is_identity(state, axis):
    out = dissipate(PolarizationAngle(state), DissipationChannel(PolarizationAngle(axis), 1.0))
    assert out.survival_probability == pytest.approx(1.0, abs=1e-12)
    assert float(angle_gap(out.output_angle.radians, PolarizationAngle(state).radians)) <= 1e-12


def test_channel_ratio_validation():
    with pytest.raises(ValueError):
        DissipationChannel(PolarizationAngle(0.0), -0.01)
    with pytest.raises(ValueError):
        DissipationChannel(PolarizationAngle(0.0), 1.01)


def test_tangent_law_from_orthogonal_axis():
    # angles measured from the axis orthogonal to the dissipation
    # direction shrink as tan(out) = sqrt(alpha) * tan(in)
    for axis in ANGLE_GRID:
        orth = PolarizationAngle(axis + PI / 2)
        for state in ANGLE_GRID:
            psi_in = angle_between(PolarizationAngle(state), orth)
            if psi_in < 1e-9 or psi_in > PI / 2 - 1e-9:
                continue
            for alpha in ALPHA_GRID:
                out = dissipate(
                    PolarizationAngle(state), DissipationChannel(PolarizationAngle(axis), alpha)
                )
                psi_out = angle_between(out.output_angle, orth)
                assert math.tan(psi_out) == pytest.approx(
                    math.sqrt(alpha) * math.tan(psi_in), rel=1e-12, abs=1e-12
                )


@pytest.mark.parametrize("alpha", ALPHA_GRID)
def test_energy_accounting(alpha):
    for state in ANGLE_GRID:
        for axis in ANGLE_GRID:
            out = dissipate(
                PolarizationAngle(state), DissipationChannel(PolarizationAngle(axis), alpha)
            )
            parallel = malus_fraction(PolarizationAngle(state), PolarizationAngle(axis))
            orthogonal = malus_fraction(PolarizationAngle(state), PolarizationAngle(axis + PI / 2))
            assert out.survival_probability == pytest.approx(
                alpha * parallel + orthogonal, abs=1e-12
            )


@pytest.mark.parametrize("alpha", ALPHA_GRID)
def test_bruteforce_amplitude_equivalence(alpha):
    for state in ANGLE_GRID:
        for axis in ANGLE_GRID:
            out = dissipate(
                PolarizationAngle(state), DissipationChannel(PolarizationAngle(axis), alpha)
            )
            survival, direction = amplitude_oracle(
                PolarizationAngle(state).radians, PolarizationAngle(axis).radians, alpha
            )
            assert out.survival_probability == pytest.approx(survival, abs=1e-12)
            # direction comparison is meaningful only when something survives;
            # at total absorption the oracle's dot products leave fma dust
            if survival > 1e-15:
                assert float(angle_gap(out.output_angle.radians, direction)) <= 1e-12


@settings(deadline=None, max_examples=200)
@given(angles, angles, ratios)
def test_bruteforce_amplitude_equivalence_fuzz(state, axis, alpha):
    pa_state = PolarizationAngle(state)
    pa_axis = PolarizationAngle(axis)
    out = dissipate(pa_state, DissipationChannel(pa_axis, alpha))
    survival, direction = amplitude_oracle(pa_state.radians, pa_axis.radians, alpha)
    assert out.survival_probability == pytest.approx(survival, abs=1e-12)
    if survival > 1e-9:
        assert float(angle_gap(out.output_angle.radians, direction)) <= 1e-9


def test_measurement_error_examples():
    assert measurement_error_probability(STATE_DIAG45.angle, STATE_DIAG45) == 0.0
    received = PolarizationAngle(math.atan(0.5))
    assert measurement_error_probability(received, STATE_DIAG45) == pytest.approx(0.1, abs=1e-12)
    # full collapse onto the lower Breidbart axis, measured against V
    collapsed = PolarizationAngle.from_degrees(22.5)
    assert measurement_error_probability(collapsed, STATE_V) == pytest.approx(
        0.8535533905932737, abs=1e-12
    )
