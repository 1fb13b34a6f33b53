"""Phenomenological multiple-Andreev-reflection subgap current and excess-current extraction.

Every subgap onset contributes a logistic step of height base_scale·D^order, where the onset
voltages are the fractions Δ₁/n, Δ₂/n and (Δ₁ + Δ₂)/n of the electrode gaps.
"""

import logging
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import expit

from junctionlab.bcs import gap_at_temperature
from junctionlab.exceptions import InsufficientDataError, OutOfRangeError
from junctionlab.models import IVCurve, Junction

logger = logging.getLogger(__name__)

# Onsets closer than this (μV) are the same onset
ONSET_TOLERANCE = 0.01
MIN_WINDOW_SAMPLES = 10


class MarParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_max: int = Field(3, ge=1, description="Highest reflection order.")
    step_width: float = Field(4.0, gt=0, description="Logistic smoothing width in μV.")
    base_scale: float = Field(0.0, ge=0, description="First-order step scale I₀ in nA.")


class OnsetFamily(Enum):
    GAP1 = "gap1"
    GAP2 = "gap2"
    SUM = "sum"


class Onset(BaseModel):
    """One subgap step: its voltage, lowest reflection order and the gap families landing on it."""

    model_config = ConfigDict(frozen=True)

    voltage: float
    order: int
    families: tuple[OnsetFamily, ...]


def subgap_onsets(gap1: float, gap2: float, n_max: int) -> list[Onset]:
    """List the MAR onsets Δ₁/n, Δ₂/n and (Δ₁ + Δ₂)/n for n = 1..n_max, sorted ascending.

    Onsets within 0.01 μV of each other merge into one, keeping the lowest order and every family.
    """
    if gap1 <= 0 or gap2 <= 0:
        raise ValueError(f"Gaps must be positive, got {gap1} and {gap2} μeV.")
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}.")
    candidates = []
    for order in range(1, n_max + 1):
        candidates.append((gap1 / order, order, OnsetFamily.GAP1))
        candidates.append((gap2 / order, order, OnsetFamily.GAP2))
        candidates.append(((gap1 + gap2) / order, order, OnsetFamily.SUM))
    candidates.sort(key=lambda c: (c[0], c[1]))

    groups: list[list[tuple[float, int, OnsetFamily]]] = []
    for candidate in candidates:
        if groups and candidate[0] - groups[-1][0][0] <= ONSET_TOLERANCE:
            groups[-1].append(candidate)
        else:
            groups.append([candidate])

    onsets = []
    for group in groups:
        families = {c[2] for c in group}
        onsets.append(
            Onset(
                voltage=group[0][0],
                order=min(c[1] for c in group),
                families=tuple(f for f in OnsetFamily if f in families),
            ),
        )
    return onsets


def _onsets_for(junction: Junction, params: MarParams, temperature: float | None) -> list[Onset]:
    gap1, gap2 = junction.electrode1.gap0, junction.electrode2.gap0
    if temperature is not None:
        gap1 = gap_at_temperature(gap1, temperature)
        gap2 = gap_at_temperature(gap2, temperature)
    if gap1 <= 0 or gap2 <= 0:
        return []
    return subgap_onsets(gap1, gap2, params.n_max)


def mar_current(
    junction: Junction,
    bias: ArrayLike,
    params: MarParams,
    *,
    temperature: float | None = None,
) -> np.ndarray | float:
    """MAR current sign(V)·Σ base_scale·D^order·σ((|V| − V_onset)/step_width) in nA.

    Odd in V and non-decreasing in |V|. The onsets use the zero-temperature gaps unless a
    temperature is given.
    """
    v = np.asarray(bias, dtype=float)
    total = np.zeros_like(v)
    d = junction.transparency
    if d > 0 and params.base_scale > 0:
        magnitude = np.abs(v)
        for onset in _onsets_for(junction, params, temperature):
            total = total + params.base_scale * d**onset.order * expit((magnitude - onset.voltage) / params.step_width)
    result = np.sign(v) * total
    return float(result) if result.ndim == 0 else result


def saturated_step_heights(
    gap1: float,
    gap2: float,
    params: MarParams,
    transparency: float,
) -> list[tuple[Onset, float]]:
    """Height in nA each onset adds once fully saturated, base_scale·D^order."""
    return [
        (onset, params.base_scale * transparency**onset.order)
        for onset in subgap_onsets(gap1, gap2, params.n_max)
    ]


def excess_current(iv: IVCurve, fit_window_low: float, *, gap_tail: bool = True) -> tuple[float, float]:
    """Extrapolate the ohmic branch I = V/Rₙ + I_exc fitted over bias ≥ fit_window_low.

    Above the gap sum the quasiparticle current approaches its asymptote as
    V/Rₙ − (Δ₁² + Δ₂²)/(2·e·Rₙ·V). With gap_tail and a window at positive bias the fit carries
    a c/V term for this tail, so a tunneling-only curve extrapolates to I_exc ≈ 0. The remaining
    error falls off as 1/V³, so the window should start well above the gap sum (about 2.5 times
    it keeps |I_exc| below 0.5 nA at Γ_D ≤ 10⁻³·Δ).

    Returns:
        tuple[float, float]: The intercept I_exc in nA and the slope resistance Rₙ in kΩ

    Raises:
        InsufficientDataError: If fewer than 10 samples lie in the window.

    """
    bias = iv.bias_array
    current = iv.current_array
    mask = bias >= fit_window_low
    if np.count_nonzero(mask) < MIN_WINDOW_SAMPLES:
        raise InsufficientDataError(
            f"Only {np.count_nonzero(mask)} samples at bias ≥ {fit_window_low:g} μV, "
            f"need at least {MIN_WINDOW_SAMPLES}.",
        )
    v = bias[mask]
    columns = [v, np.ones_like(v)]
    if gap_tail and fit_window_low > 0:
        columns.append(1.0 / v)
    coefficients, *_ = np.linalg.lstsq(np.column_stack(columns), current[mask], rcond=None)
    slope, intercept = coefficients[0], coefficients[1]
    rn = 1.0 / slope if slope > 0 else float("inf")
    return float(intercept), float(rn)


def calibrate_base_scale(
    junction: Junction,
    params: MarParams,
    v_low: float,
    v_high: float,
    target_rise: float,
    qp_rise: float = 0.0,
    *,
    temperature: float | None = None,
) -> float:
    """Solve the base scale that makes the subgap current rise by target_rise between two biases.

    The composite current is linear in base_scale, so the solution is
    (target_rise − qp_rise) / (unit MAR rise), where qp_rise is the tunneling current's own rise
    over the same interval.

    Raises:
        OutOfRangeError: If no base scale ≥ 0 reaches the target.

    """
    unit = params.model_copy(update={"base_scale": 1.0})
    rise = mar_current(junction, [v_low, v_high], unit, temperature=temperature)
    unit_rise = float(rise[1] - rise[0])
    if unit_rise <= 0:
        raise OutOfRangeError(
            f"MAR current does not rise between {v_low:g} and {v_high:g} μV (D = {junction.transparency:g}).",
        )
    base_scale = (target_rise - qp_rise) / unit_rise
    if base_scale < 0:
        raise OutOfRangeError(
            f"The tunneling current alone rises by {qp_rise:g} nA, above the target of {target_rise:g} nA.",
        )
    logger.debug("Calibrated MAR base scale to %g nA for a %g nA rise.", base_scale, target_rise)
    return base_scale
