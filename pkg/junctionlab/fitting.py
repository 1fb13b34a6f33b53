"""Parameter extraction from IV data.

The composite model is the quasiparticle current at V − V_offset plus the MAR current plus
I_offset. Free parameters are mapped onto the unit box spanned by their bounds and optimised with
Nelder-Mead from the initial point and a few seeded perturbations of it.
"""

# ruff: noqa: PLR2004

import logging
import math
import time
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from functools import partial

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.optimize import minimize

from junctionlab.exceptions import (
    BudgetExhaustedError,
    InsufficientDataError,
    ModelEvaluationError,
    PeakNotFoundError,
)
from junctionlab.fitio import differentiate_iv
from junctionlab.mar import MarParams, excess_current, mar_current
from junctionlab.models import Electrode, IVCurve, Junction
from junctionlab.prometheus.metrics import FIT_EVALUATIONS, FIT_SECONDS
from junctionlab.sweep import parallel_map
from junctionlab.tunneling import DEFAULT_GRID_STEP, CurveMethod, OccupationModel, qp_current_curve

logger = logging.getLogger(__name__)

DEFAULT_DELTA1 = 190.0
DEFAULT_BASE_SCALE = 150.0

# Number of first-order onset families, used to turn an excess current into a transparency
FIRST_ORDER_FAMILIES = 3
# A conductance peak must stand this far above the ohmic conductance
PEAK_PROMINENCE = 1.1
OHMIC_FRACTION = 0.8

SIMPLEX_STEP = 0.05
RESTART_SPREAD = 0.1
CURVATURE_STEP = 1e-3


class ModelParameters(BaseModel):
    """Every parameter of the composite model."""

    model_config = ConfigDict(frozen=True)

    delta1: float = Field(DEFAULT_DELTA1, ge=0, description="Gap of electrode 1 in μeV.")
    delta2: float = Field(DEFAULT_DELTA1, ge=0, description="Gap of electrode 2 in μeV.")
    rn: float = Field(18.6, gt=0, description="Normal-state resistance in kΩ.")
    transparency: float = Field(0.0, ge=0, le=1, description="Barrier transparency D.")
    dynes1: float = Field(0.19, ge=0, description="Dynes broadening of electrode 1 in μeV.")
    dynes2: float = Field(0.19, ge=0, description="Dynes broadening of electrode 2 in μeV.")
    temperature: float = Field(0.02, gt=0, description="Temperature in K.")
    v_offset: float = Field(0.0, description="Bias offset in μV.")
    i_offset: float = Field(0.0, description="Current offset in nA.")
    base_scale: float = Field(0.0, ge=0, description="MAR first-order step scale in nA.")

    def junction(self) -> Junction:
        return Junction(
            electrode1=Electrode(gap0=self.delta1, dynes=self.dynes1),
            electrode2=Electrode(gap0=self.delta2, dynes=self.dynes2),
            rn=self.rn,
            transparency=self.transparency,
        )


PARAMETER_NAMES = tuple(ModelParameters.model_fields)


class Objective(Enum):
    CURRENT = "current"
    CONDUCTANCE = "conductance"


class FitPath(Enum):
    FULL_CURVE = "full-curve"
    PEAK = "peak"


class FitConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    free: tuple[str, ...] = ("delta2", "rn", "transparency")
    bounds: dict[str, tuple[float, float]] = Field(default_factory=dict)
    fixed: dict[str, float] = Field(
        default_factory=dict,
        description="Values of parameters; for free parameters they are the starting point.",
    )
    objective: Objective = Objective.CURRENT
    max_evals: int = Field(4000, ge=1)
    seed: int = 0
    restarts: int = Field(3, ge=1)
    mar: MarParams = MarParams()
    grid_step: float = Field(DEFAULT_GRID_STEP, gt=0)
    label: str = ""

    @model_validator(mode="after")
    def _check_parameters(self) -> "FitConfig":
        for name in (*self.free, *self.bounds, *self.fixed):
            if name not in PARAMETER_NAMES:
                raise ValueError(f"Unknown fit parameter '{name}'.")
        if len(set(self.free)) != len(self.free):
            raise ValueError("Free parameters must be unique.")
        for name in self.free:
            if name not in self.bounds:
                raise ValueError(f"Free parameter '{name}' has no bounds.")
            low, high = self.bounds[name]
            if not (math.isfinite(low) and math.isfinite(high) and low < high):
                raise ValueError(f"Bounds of '{name}' must be finite with low < high, got ({low}, {high}).")
        return self


class FitResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    parameters: ModelParameters
    free: tuple[str, ...]
    rms: float = Field(ge=0, description="Residual root-mean-square in nA, or μS for the conductance objective.")
    initial_rms: float = Field(ge=0)
    evaluations: int = Field(ge=0)
    converged: bool
    objective: Objective = Objective.CURRENT
    path: FitPath = FitPath.FULL_CURVE
    sensitivity: dict[str, float] = Field(
        default_factory=dict,
        description="Curvature of the residual sum of squares per free parameter, in parameter units.",
    )
    uncertainties: dict[str, float] = Field(default_factory=dict)
    label: str = ""


def composite_current(
    params: ModelParameters,
    bias: Sequence[float] | np.ndarray,
    mar: MarParams | None = None,
    *,
    method: CurveMethod = CurveMethod.GRID,
    grid_step: float = DEFAULT_GRID_STEP,
) -> np.ndarray:
    """Model current in nA: qp current at V − V_offset, plus MAR current, plus I_offset.

    The MAR step scale comes from params.base_scale; mar supplies n_max and the step width.
    """
    mar = (mar or MarParams()).model_copy(update={"base_scale": params.base_scale})
    junction = params.junction()
    shifted = np.asarray(bias, dtype=float) - params.v_offset
    qp = qp_current_curve(
        junction,
        shifted,
        params.temperature,
        OccupationModel.thermal(),
        method=method,
        grid_step=grid_step,
    )
    return qp + mar_current(junction, shifted, mar) + params.i_offset


def _ohmic_fit(bias: np.ndarray, current: np.ndarray) -> float:
    # Least squares on V, sign(V), 1 and 1/V; the 1/V column takes up the gap-edge tail
    mask = np.abs(bias) >= OHMIC_FRACTION * np.max(np.abs(bias))
    mask &= bias != 0
    if np.count_nonzero(mask) < 4:
        raise InsufficientDataError("Too few samples in the top 20% of |bias| to fit the ohmic slope.")
    v = bias[mask]
    design = np.column_stack([v, np.sign(v), np.ones_like(v), 1.0 / v])
    coefficients, *_ = np.linalg.lstsq(design, current[mask], rcond=None)
    slope = coefficients[0]
    if slope <= 0:
        raise PeakNotFoundError("The high-bias branch has no positive ohmic slope.")
    return 1.0 / slope


def _peak(bias: np.ndarray, didv: np.ndarray, ohmic_didv: float) -> float | None:
    if bias.size < 3:
        return None
    index = int(np.argmax(didv))
    if index in {0, bias.size - 1} or didv[index] < PEAK_PROMINENCE * ohmic_didv:
        return None
    return float(bias[index])


def estimate_initial(
    iv: IVCurve,
    delta1: float = DEFAULT_DELTA1,
    base_scale: float = DEFAULT_BASE_SCALE,
) -> ModelParameters:
    """Read starting values off an IV curve.

    Rₙ comes from the ohmic slope over the top 20% of |bias|, the gap sum from the dI/dV maximum on
    each bias branch and Δ₂ = gap sum − Δ₁. The offsets come from the midpoint of the two peaks and
    D from the excess current.

    Raises:
        PeakNotFoundError: If the conductance has no interior maximum.

    """
    bias = iv.bias_array
    current = iv.current_array
    rn = _ohmic_fit(bias, current)
    didv = differentiate_iv(iv).didv_array
    ohmic_didv = 1e3 / rn

    positive = _peak(bias[bias > 0], didv[bias > 0], ohmic_didv)
    negative = _peak(bias[bias < 0], didv[bias < 0], ohmic_didv)
    if positive is None and negative is None:
        raise PeakNotFoundError("The conductance has no interior maximum.")
    if positive is not None and negative is not None:
        gap_sum = (positive - negative) / 2
        v_offset = (positive + negative) / 2
    else:
        gap_sum = abs(positive if positive is not None else negative)
        v_offset = 0.0
    i_offset = float(np.interp(v_offset, bias, current))

    transparency = 0.0
    if base_scale > 0:
        try:
            i_exc, _ = excess_current(iv, OHMIC_FRACTION * float(np.max(bias)), gap_tail=False)
            transparency = float(np.clip((i_exc - i_offset) / (FIRST_ORDER_FAMILIES * base_scale), 0.0, 1.0))
        except InsufficientDataError:
            logger.debug("No positive ohmic branch for the excess current, starting from D = 0.")
    logger.debug("Initial estimate: gap sum %.1f μV, Rₙ %.3g kΩ, D %.3g.", gap_sum, rn, transparency)
    return ModelParameters(
        delta1=delta1,
        delta2=max(gap_sum - delta1, 0.0),
        rn=rn,
        transparency=transparency,
        v_offset=v_offset,
        i_offset=i_offset,
        base_scale=base_scale,
    )


@dataclass(frozen=True)
class _Problem:
    """Everything one restart needs; picklable so restarts can run in worker processes."""

    bias: np.ndarray
    target: np.ndarray
    base: ModelParameters
    free: tuple[str, ...]
    low: np.ndarray
    span: np.ndarray
    objective: Objective
    mar: MarParams
    grid_step: float

    def parameters(self, x: np.ndarray) -> ModelParameters:
        values = self.low + np.clip(x, 0.0, 1.0) * self.span
        return self.base.model_copy(update={name: float(v) for name, v in zip(self.free, values, strict=True)})

    def residual(self, params: ModelParameters) -> np.ndarray:
        try:
            model = composite_current(params, self.bias, self.mar, grid_step=self.grid_step)
        except Exception as exc:
            raise ModelEvaluationError(params.model_dump(), exc) from exc
        if self.objective is Objective.CONDUCTANCE:
            model = np.gradient(model, self.bias) * 1e3
        return model - self.target

    def sum_of_squares(self, x: np.ndarray) -> float:
        residual = self.residual(self.parameters(x))
        return float(np.dot(residual, residual))

    def rms(self, x: np.ndarray) -> float:
        return math.sqrt(self.sum_of_squares(x) / self.bias.size)


def _initial_simplex(x0: np.ndarray) -> np.ndarray:
    simplex = [x0]
    for i in range(x0.size):
        vertex = x0.copy()
        vertex[i] = x0[i] + SIMPLEX_STEP if x0[i] + SIMPLEX_STEP <= 1 else x0[i] - SIMPLEX_STEP
        simplex.append(vertex)
    return np.array(simplex)


@dataclass(frozen=True)
class _RestartOutcome:
    x: np.ndarray
    rms: float
    evaluations: int
    converged: bool


def _run_restart(problem: _Problem, max_evals: int, x0: np.ndarray) -> _RestartOutcome:
    result = minimize(
        problem.rms,
        x0,
        method="Nelder-Mead",
        bounds=[(0.0, 1.0)] * x0.size,
        options={
            "initial_simplex": _initial_simplex(x0),
            "maxfev": max_evals,
            "xatol": 1e-6,
            "fatol": 1e-9,
        },
    )
    x = np.clip(result.x, 0.0, 1.0)
    return _RestartOutcome(x=x, rms=float(result.fun), evaluations=int(result.nfev), converged=bool(result.success))


def _curvature(problem: _Problem, x: np.ndarray) -> tuple[np.ndarray, int]:
    """Second differences of the sum of squares along each unit-box axis."""
    centre = np.clip(x, CURVATURE_STEP, 1.0 - CURVATURE_STEP)
    f0 = problem.sum_of_squares(centre)
    curvature = np.zeros(x.size)
    for i in range(x.size):
        step = np.zeros(x.size)
        step[i] = CURVATURE_STEP
        plus = problem.sum_of_squares(centre + step)
        minus = problem.sum_of_squares(centre - step)
        curvature[i] = (plus - 2 * f0 + minus) / CURVATURE_STEP**2
    return curvature, 1 + 2 * x.size


def _start_values(data: IVCurve, cfg: FitConfig) -> ModelParameters:
    fixed = dict(cfg.fixed)
    missing = [name for name in cfg.free if name not in fixed]
    if missing:
        estimate = estimate_initial(
            data,
            delta1=fixed.get("delta1", DEFAULT_DELTA1),
            base_scale=fixed.get("base_scale", DEFAULT_BASE_SCALE),
        )
        for name in missing:
            fixed[name] = getattr(estimate, name)
    for name in cfg.free:
        low, high = cfg.bounds[name]
        fixed[name] = min(max(fixed[name], low), high)
    return ModelParameters(**fixed)


def fit_iv(data: IVCurve, cfg: FitConfig) -> FitResult:
    """Fit the composite model to an IV curve by least squares over the free parameters.

    Free parameters without a start value in cfg.fixed start from estimate_initial(). The first
    restart starts from the initial point; the others from seeded perturbations of it. The best
    restart wins, ties going to the earlier one.

    Raises:
        BudgetExhaustedError: With the best-so-far result, if the best restart did not converge.
        ModelEvaluationError: If the model fails at some parameter point.

    """
    started = time.monotonic()
    base = _start_values(data, cfg)
    bias = data.bias_array
    target = data.current_array
    if cfg.objective is Objective.CONDUCTANCE:
        target = differentiate_iv(data).didv_array
    low = np.array([cfg.bounds[name][0] for name in cfg.free], dtype=float)
    high = np.array([cfg.bounds[name][1] for name in cfg.free], dtype=float)
    problem = _Problem(bias, target, base, cfg.free, low, high - low, cfg.objective, cfg.mar, cfg.grid_step)

    x0 = (np.array([getattr(base, name) for name in cfg.free], dtype=float) - low) / (high - low)
    initial_rms = problem.rms(x0)
    evaluations = 1
    if len(cfg.free) == 0:
        FIT_EVALUATIONS.inc(evaluations)
        return FitResult(
            parameters=base,
            free=(),
            rms=initial_rms,
            initial_rms=initial_rms,
            evaluations=evaluations,
            converged=True,
            objective=cfg.objective,
            label=cfg.label,
        )

    rng = np.random.default_rng(cfg.seed)
    starts = [x0] + [np.clip(x0 + rng.normal(0.0, RESTART_SPREAD, x0.size), 0.0, 1.0) for _ in range(cfg.restarts - 1)]
    per_restart = max(cfg.max_evals // cfg.restarts, x0.size + 2)
    outcomes = parallel_map(partial(_run_restart, problem, per_restart), starts, kind="restart")
    for index, outcome in enumerate(outcomes):
        logger.debug("Restart %d: rms %.6g after %d evaluations.", index, outcome.rms, outcome.evaluations)
    best = min(range(len(outcomes)), key=lambda i: (outcomes[i].rms, i))
    outcome = outcomes[best]
    evaluations += sum(o.evaluations for o in outcomes)

    curvature, curvature_evals = _curvature(problem, outcome.x)
    evaluations += curvature_evals
    curvature = curvature / (high - low) ** 2
    dof = max(bias.size - len(cfg.free), 1)
    variance = outcome.rms**2 * bias.size / dof
    uncertainties = {
        name: math.sqrt(2 * variance / c) if c > 0 else math.inf
        for name, c in zip(cfg.free, curvature, strict=True)
    }

    result = FitResult(
        parameters=problem.parameters(outcome.x),
        free=cfg.free,
        rms=outcome.rms,
        initial_rms=initial_rms,
        evaluations=evaluations,
        converged=outcome.converged,
        objective=cfg.objective,
        sensitivity={name: float(c) for name, c in zip(cfg.free, curvature, strict=True)},
        uncertainties=uncertainties,
        label=cfg.label,
    )
    FIT_EVALUATIONS.inc(evaluations)
    FIT_SECONDS.observe(time.monotonic() - started)
    if not result.converged:
        logger.warning("Fit did not converge within %d evaluations.", cfg.max_evals)
        raise BudgetExhaustedError(result)
    return result


def peak_estimate(
    iv: IVCurve,
    delta1: float = DEFAULT_DELTA1,
    mar: MarParams | None = None,
    label: str = "",
) -> FitResult:
    """Read Δ₂ off the conductance peak alone, without any fitting."""
    params = estimate_initial(iv, delta1=delta1, base_scale=(mar or MarParams()).base_scale)
    residual = composite_current(params, iv.bias_array, mar) - iv.current_array
    rms = float(np.sqrt(np.mean(residual**2)))
    FIT_EVALUATIONS.inc()
    return FitResult(
        parameters=params,
        free=(),
        rms=rms,
        initial_rms=rms,
        evaluations=1,
        converged=True,
        path=FitPath.PEAK,
        label=label,
    )


def report_table(results: Sequence[FitResult], labels: Sequence[str] | None = None) -> str:
    """Format fit results as a text table with the Δ₁ assumption in the footer."""
    lines = [
        f"{'label':<24} {'Δ₂ (μeV)':>9} {'Rₙ (kΩ)':>8} {'D':>7} {'rms':>10} {'path':>10}",
        "-" * 73,
    ]
    for i, result in enumerate(results):
        label = labels[i] if labels is not None else result.label
        p = result.parameters
        lines.append(
            f"{label:<24} {p.delta2:>9.0f} {p.rn:>8.1f} {p.transparency:>7.3f} "
            f"{result.rms:>10.4g} {result.path.value:>10}",
        )
    deltas = sorted({r.parameters.delta1 for r in results}) or [DEFAULT_DELTA1]
    lines.append("-" * 73)
    lines.append(f"Δ₂ extracted assuming Δ₁ = {', '.join(f'{d:.0f}' for d in deltas)} μeV.")
    return "\n".join(lines) + "\n"
