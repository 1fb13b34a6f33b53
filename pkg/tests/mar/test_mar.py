"""Tests for the MAR subgap current."""

import numpy as np
import pytest

from junctionlab.exceptions import InsufficientDataError, OutOfRangeError
from junctionlab.mar import (
    MarParams,
    OnsetFamily,
    calibrate_base_scale,
    excess_current,
    mar_current,
    saturated_step_heights,
    subgap_onsets,
)
from junctionlab.models import IVCurve, Junction
from junctionlab.tunneling import OccupationModel, qp_current_curve

PARAMS = MarParams(n_max=3, step_width=4.0, base_scale=150.0)


def test_symmetric_onsets_merge():
    """Test that coinciding onsets of a symmetric junction merge into one."""
    # Execute
    onsets = subgap_onsets(190, 190, 3)

    # Verify
    assert [round(o.voltage, 2) for o in onsets] == [63.33, 95.0, 126.67, 190.0, 380.0]
    gap_edge = onsets[3]
    assert gap_edge.order == 1
    assert gap_edge.families == (OnsetFamily.GAP1, OnsetFamily.GAP2, OnsetFamily.SUM)
    assert onsets[-1].families == (OnsetFamily.SUM,)


def test_asymmetric_onsets_are_distinct():
    """Test that unequal gaps give three onsets per order."""
    onsets = subgap_onsets(190, 120, 3)
    assert len(onsets) == 9
    assert [o.voltage for o in onsets] == sorted(o.voltage for o in onsets)
    assert onsets[-1].voltage == 310


@pytest.mark.parametrize(("gap1", "gap2", "n_max"), [(0, 120, 3), (190, -1, 3), (190, 120, 0)])
def test_onsets_reject_bad_input(gap1: float, gap2: float, n_max: int):
    """Test that non-positive gaps or orders are rejected."""
    with pytest.raises(ValueError, match="must"):
        subgap_onsets(gap1, gap2, n_max)


def test_step_heights_scale_with_transparency():
    """Test that each order is D times weaker than the one below it."""
    heights = {onset.order: height for onset, height in saturated_step_heights(190, 120, PARAMS, 0.05)}
    assert heights[1] == pytest.approx(150 * 0.05)
    assert heights[2] / heights[1] == pytest.approx(0.05, rel=1e-6)
    assert heights[3] / heights[2] == pytest.approx(0.05, rel=1e-6)


def test_opaque_barrier_has_no_mar(al_ti_junction: Junction):
    """Test that a zero transparency switches MAR off."""
    opaque = al_ti_junction.model_copy(update={"transparency": 0.0})
    assert np.all(mar_current(opaque, np.linspace(-400, 400, 81), PARAMS) == 0)


def test_mar_current_is_odd_and_monotonic(al_ti_junction: Junction):
    """Test that the MAR current is odd in V and non-decreasing in |V|."""
    # Setup
    bias = np.linspace(0, 500, 501)

    # Execute
    forward = mar_current(al_ti_junction, bias, PARAMS)
    reverse = mar_current(al_ti_junction, -bias, PARAMS)

    # Verify
    np.testing.assert_allclose(reverse, -forward)
    assert np.all(np.diff(forward) >= 0)
    assert mar_current(al_ti_junction, 0.0, PARAMS) == 0.0


def test_mar_current_saturates(al_ti_junction: Junction):
    """Test that far above the last onset the current is the sum of all step heights."""
    total = sum(height for _, height in saturated_step_heights(190, 120, PARAMS, 0.05))
    assert mar_current(al_ti_junction, 2000.0, PARAMS) == pytest.approx(total)


def test_thermal_gaps_shift_onsets(al_ti_junction: Junction):
    """Test that a temperature close to T_c moves the onsets down."""
    cold = mar_current(al_ti_junction, 300.0, PARAMS)
    warm = mar_current(al_ti_junction, 300.0, PARAMS, temperature=0.7)
    assert warm > cold


def test_calibrate_base_scale(al_ti_junction: Junction):
    """Test that the calibrated scale reproduces the requested rise."""
    # Execute
    scale = calibrate_base_scale(al_ti_junction, PARAMS, 100, 300, target_rise=15.0, qp_rise=2.0)

    # Verify
    calibrated = PARAMS.model_copy(update={"base_scale": scale})
    low, high = mar_current(al_ti_junction, [100, 300], calibrated)
    assert high - low == pytest.approx(13.0)


def test_calibrate_without_transparency(al_ti_junction: Junction):
    """Test that calibration fails when MAR cannot rise."""
    opaque = al_ti_junction.model_copy(update={"transparency": 0.0})
    with pytest.raises(OutOfRangeError, match="does not rise"):
        calibrate_base_scale(opaque, PARAMS, 100, 300, target_rise=15.0)


def test_calibrate_below_tunneling_rise(al_ti_junction: Junction):
    """Test that a target below the tunneling rise cannot be reached."""
    with pytest.raises(OutOfRangeError, match="above the target"):
        calibrate_base_scale(al_ti_junction, PARAMS, 100, 300, target_rise=1.0, qp_rise=5.0)


def test_excess_current():
    """Test that the ohmic branch extrapolates to the right intercept and slope."""
    bias = np.linspace(0, 1000, 201)
    iv = IVCurve.from_arrays(bias, bias / 10 + 5)

    intercept, rn = excess_current(iv, 500)

    assert intercept == pytest.approx(5.0)
    assert rn == pytest.approx(10.0)


def test_excess_current_needs_samples():
    """Test that a window with too few samples is rejected."""
    bias = np.linspace(0, 1000, 21)
    iv = IVCurve.from_arrays(bias, bias / 10)
    with pytest.raises(InsufficientDataError, match="need at least 10"):
        excess_current(iv, 800)


def _high_bias_curve(junction: Junction, mar: MarParams | None = None) -> IVCurve:
    bias = np.linspace(1000, 3000, 41)
    current = qp_current_curve(junction, bias, 0.02, OccupationModel.thermal())
    if mar is not None:
        current = current + mar_current(junction, bias, mar)
    return IVCurve.from_arrays(bias, current)


def test_excess_current_of_tunneling_only_curve(al_junction: Junction):
    """Test that a symmetric curve without Andreev reflection extrapolates to no excess current."""
    # Setup
    iv = _high_bias_curve(al_junction)

    # Execute
    intercept, rn = excess_current(iv, 1000)
    plain_intercept, _ = excess_current(iv, 1000, gap_tail=False)

    # Verify
    assert abs(intercept) < 0.5
    assert rn == pytest.approx(18.6, rel=5e-3)
    # A straight line through the same points picks up the negative gap-edge tail
    assert plain_intercept < -1.0


def test_excess_current_of_mar_curve(al_ti_junction: Junction):
    """Test that saturated MAR steps show up as a positive excess current."""
    # Setup
    iv = _high_bias_curve(al_ti_junction, PARAMS)
    steps = sum(height for _, height in saturated_step_heights(190, 120, PARAMS, 0.05))

    # Execute
    intercept, _ = excess_current(iv, 1000)

    # Verify
    assert intercept == pytest.approx(steps, abs=0.5)
