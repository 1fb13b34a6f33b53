"""Quasiparticle tunneling across an asymmetric-gap SIS junction.

The net current is I(V) = (1/e·Rₙ) ∫ dos₁(E)·dos₂(E + eV)·[f₁(E) − f₂(E + eV)] dE, split into the
forward part f₁·(1 − f₂) and the backward part (1 − f₁)·f₂. Energies in μeV and biases in μV are
interchangeable (e·1 μV = 1 μeV), so the integral divided by Rₙ in kΩ is a current in nA.

Two evaluators exist. qp_current() runs adaptive quadrature per bias point and supports both
occupation modes. The grid evaluator in qp_current_curve() handles thermal occupations only and
computes a whole bias sweep with one FFT correlation on a uniform energy mesh.
"""

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache, partial

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.integrate import quad
from scipy.signal import fftconvolve
from scipy.special import expit

from junctionlab.bcs import (
    cell_averaged_dos,
    dos_scalar,
    fermi,
    fermi_scalar,
    gap_at_temperature,
    log_fermi_scalar,
    simulation_profile,
    thermal_qp_density,
)
from junctionlab.exceptions import NonNormalizableError, QuadratureFailureError
from junctionlab.models import Electrode, Junction, QuasiparticleState
from junctionlab.sweep import parallel_map
from junctionlab.units import CONSTANTS

logger = logging.getLogger(__name__)

EPSREL = 1e-6
EPSABS = 1e-13
QUAD_LIMIT = 400

TRUNCATION_GAPS = 32.0
TAIL_KT = 40.0

DEFAULT_GRID_STEP = 0.5


class OccupationMode(Enum):
    THERMAL = "thermal"
    NONEQUILIBRIUM = "nonequilibrium"


class CurveMethod(Enum):
    AUTO = "auto"
    ADAPTIVE = "adaptive"
    GRID = "grid"


class OccupationModel(BaseModel):
    """How quasiparticle states are occupied in the two electrodes.

    In thermal mode every state follows the Fermi function. In nonequilibrium mode the states outside
    the gap follow a·f(E), with one scalar a per electrode chosen so the electrode holds its target
    density n_i. Subgap states stay thermal.
    """

    model_config = ConfigDict(frozen=True)

    mode: OccupationMode = OccupationMode.THERMAL
    n1: float | None = Field(None, ge=0, description="Target quasiparticle density of electrode 1 in μm⁻³.")
    n2: float | None = Field(None, ge=0, description="Target quasiparticle density of electrode 2 in μm⁻³.")

    @model_validator(mode="after")
    def _check_densities(self) -> "OccupationModel":
        if self.mode is OccupationMode.NONEQUILIBRIUM and (self.n1 is None or self.n2 is None):
            raise ValueError("Nonequilibrium occupation needs a density for both electrodes.")
        return self

    @staticmethod
    def thermal() -> "OccupationModel":
        return OccupationModel(mode=OccupationMode.THERMAL)

    @staticmethod
    def nonequilibrium(n1: float, n2: float) -> "OccupationModel":
        return OccupationModel(mode=OccupationMode.NONEQUILIBRIUM, n1=n1, n2=n2)

    @staticmethod
    def from_state(state: QuasiparticleState, mode: OccupationMode) -> "OccupationModel":
        """Build the occupation for a resolved state in the given mode."""
        if mode is OccupationMode.THERMAL:
            return OccupationModel.thermal()
        return OccupationModel.nonequilibrium(state.n1, state.n2)

    def density(self, index: int) -> float:
        """Get the target density of an electrode by its 1-based index."""
        value = self.n1 if index == 1 else self.n2
        if value is None:
            raise ValueError("Thermal occupation has no target density.")
        return value


@lru_cache(maxsize=4096)
def _log_scale(gap: float, dynes: float, n0: float, kt: float, density: float) -> float:
    if density == 0:
        return -math.inf

    def integrand(energy: float) -> float:
        # f(E)·exp(Δ/kT) keeps the integral of order kT instead of underflowing
        return dos_scalar(energy, gap, dynes) * math.exp(log_fermi_scalar(energy, kt) + gap / kt)

    upper = gap + (TAIL_KT + 40.0) * kt
    points = [p for p in (gap + dynes, gap + kt) if gap < p < upper]
    scaled = _integrate(integrand, gap, upper, points)
    if scaled <= 0:
        raise NonNormalizableError(f"No quasiparticle states available above Δ = {gap:g} μeV.")
    log_unit_density = math.log(4 * n0 * scaled) - gap / kt
    log_scale = math.log(density) - log_unit_density
    if log_scale + log_fermi_scalar(gap, kt) > 0:
        raise NonNormalizableError(
            f"A density of {density:g} μm⁻³ would occupy the gap edge above 1 "
            f"(Δ = {gap:g} μeV, k_B·T = {kt:g} μeV).",
        )
    return log_scale


def occupation_scale(electrode: Electrode, temperature: float, density: float) -> float:
    """Natural log of the scale a that makes a·f(E) hold the given density.

    The density counts both branches, n = 2·n0·∫_{|E|>Δ} dos·occupation dE = 4·n0·∫_Δ^∞ dos·a·f dE,
    so a = 1 reproduces thermal_qp_density(). Returns -inf for a zero density.

    Raises:
        NonNormalizableError: If the scaled occupation would exceed 1 at the gap edge.

    """
    profile = simulation_profile(electrode, temperature)
    kt = CONSTANTS.k_b * temperature
    return _log_scale(profile.gap, profile.dynes, electrode.n0, kt, density)


@dataclass(frozen=True)
class _Side:
    """Occupation and DOS of one electrode at one temperature."""

    gap: float
    dynes: float
    kt: float
    log_scale: float | None

    def dos(self, energy: float) -> float:
        return dos_scalar(energy, self.gap, self.dynes)

    def occupation(self, energy: float) -> float:
        if self.log_scale is None or abs(energy) < self.gap:
            return fermi_scalar(energy, self.kt)
        if energy > 0:
            return math.exp(self.log_scale + log_fermi_scalar(energy, self.kt))
        return 1.0 - math.exp(self.log_scale + log_fermi_scalar(-energy, self.kt))

    def vacancy(self, energy: float) -> float:
        if self.log_scale is None or abs(energy) < self.gap:
            return fermi_scalar(-energy, self.kt)
        if energy > 0:
            return 1.0 - math.exp(self.log_scale + log_fermi_scalar(energy, self.kt))
        return math.exp(self.log_scale + log_fermi_scalar(-energy, self.kt))

    @property
    def tail(self) -> float:
        """Energy beyond which the occupied (or vacant) tail is below e⁻⁴⁰."""
        extra = 0.0 if self.log_scale is None else max(0.0, self.log_scale)
        return self.kt * (TAIL_KT + extra)


def _side(junction: Junction, index: int, temperature: float, occ: OccupationModel) -> _Side:
    electrode = junction.electrode(index)
    profile = simulation_profile(electrode, temperature)
    log_scale = None
    if occ.mode is OccupationMode.NONEQUILIBRIUM:
        log_scale = occupation_scale(electrode, temperature, occ.density(index))
    return _Side(profile.gap, profile.dynes, CONSTANTS.k_b * temperature, log_scale)


def occupation_at(
    junction: Junction,
    electrode_index: int,
    energy: float,
    temperature: float,
    occ: OccupationModel,
) -> float:
    """Occupation of a state at an energy in one electrode."""
    return _side(junction, electrode_index, temperature, occ).occupation(energy)


def vacancy_at(
    junction: Junction,
    electrode_index: int,
    energy: float,
    temperature: float,
    occ: OccupationModel,
) -> float:
    """One minus occupation_at(), computed without cancellation in the deep tails."""
    return _side(junction, electrode_index, temperature, occ).vacancy(energy)


def _integrate(func: Callable[[float], float], lower: float, upper: float, points: Sequence[float]) -> float:
    if upper <= lower:
        return 0.0
    inner = sorted({p for p in points if lower < p < upper})
    result = quad(
        func,
        lower,
        upper,
        points=inner or None,
        epsabs=EPSABS,
        epsrel=EPSREL,
        limit=QUAD_LIMIT,
        full_output=1,
    )
    value, abserr = result[0], result[1]
    if len(result) > 3:  # noqa: PLR2004
        tolerance = max(EPSABS, EPSREL * abs(value))
        if abserr > tolerance:
            raise QuadratureFailureError(
                f"Integration over [{lower:g}, {upper:g}] μeV stopped at {value:g} ± {abserr:.2g}: {result[3]}",
            )
        logger.debug("Quadrature warning accepted (error %.2g on %.6g): %s", abserr, value, result[3])
    return value


def _window(side1: _Side, side2: _Side, bias: float) -> tuple[float, float, list[float]]:
    lower = min(-bias - side2.tail, -side1.tail)
    upper = max(side1.tail, side2.tail - bias)
    box = TRUNCATION_GAPS * max(side1.gap, side2.gap) + TAIL_KT * side1.kt + abs(bias)
    points = [-side1.gap, side1.gap, -side2.gap - bias, side2.gap - bias, 0.0, -bias]
    return max(lower, -box), min(upper, box), points


def _sides(junction: Junction, temperature: float, occ: OccupationModel) -> tuple[_Side, _Side]:
    if temperature <= 0:
        raise ValueError(f"Temperature must be positive, got {temperature} K.")
    return _side(junction, 1, temperature, occ), _side(junction, 2, temperature, occ)


def qp_current(junction: Junction, bias: float, temperature: float, occ: OccupationModel) -> float:
    """Net quasiparticle current in nA at a bias in μV.

    Raises:
        QuadratureFailureError: If the adaptive integration does not converge.

    """
    side1, side2 = _sides(junction, temperature, occ)

    def integrand(energy: float) -> float:
        rho = side1.dos(energy) * side2.dos(energy + bias)
        if rho == 0:
            return 0.0
        forward = side1.occupation(energy) * side2.vacancy(energy + bias)
        backward = side1.vacancy(energy) * side2.occupation(energy + bias)
        return rho * (forward - backward)

    lower, upper, points = _window(side1, side2, bias)
    return _integrate(integrand, lower, upper, points) / junction.rn


def directional_currents(
    junction: Junction,
    bias: float,
    temperature: float,
    occ: OccupationModel,
) -> tuple[float, float]:
    """Forward and backward quasiparticle currents in nA, both non-negative.

    I_fwd carries electrons from electrode 1 to electrode 2 (f₁·(1 − f₂)), I_bwd the reverse.
    Their difference is the net current of qp_current().
    """
    side1, side2 = _sides(junction, temperature, occ)

    def forward(energy: float) -> float:
        rho = side1.dos(energy) * side2.dos(energy + bias)
        return 0.0 if rho == 0 else rho * side1.occupation(energy) * side2.vacancy(energy + bias)

    def backward(energy: float) -> float:
        rho = side1.dos(energy) * side2.dos(energy + bias)
        return 0.0 if rho == 0 else rho * side1.vacancy(energy) * side2.occupation(energy + bias)

    lower, upper, points = _window(side1, side2, bias)
    i_fwd = _integrate(forward, lower, upper, points) / junction.rn
    i_bwd = _integrate(backward, lower, upper, points) / junction.rn
    return max(i_fwd, 0.0), max(i_bwd, 0.0)


def _log_boltzmann_weight(electrode: Electrode, temperature: float) -> float:
    kt = CONSTANTS.k_b * temperature
    gap = gap_at_temperature(electrode.gap0, temperature)
    # A vanished gap keeps the prefactor finite
    prefactor_gap = gap if gap > 0 else kt
    return math.log(electrode.n0) + 0.5 * math.log(kt * prefactor_gap) - gap / kt


def partition_nonequilibrium(junction: Junction, n_total: float, temperature: float) -> tuple[float, float]:
    """Split a nonequilibrium density between the electrodes by their Boltzmann weights.

    The weights are w_i = n0_i·√(k_B·T·Δ_i)·exp(−Δ_i/k_B·T). The smaller share is computed first and
    the larger one is the remainder, so the shares add up to n_total.
    """
    if n_total < 0:
        raise ValueError(f"Density must be non-negative, got {n_total}.")
    if n_total == 0:
        return 0.0, 0.0
    lw1 = _log_boltzmann_weight(junction.electrode1, temperature)
    lw2 = _log_boltzmann_weight(junction.electrode2, temperature)
    share1 = float(expit(lw1 - lw2))
    if share1 <= 0.5:  # noqa: PLR2004
        n1 = n_total * share1
        return n1, n_total - n1
    n2 = n_total * float(expit(lw2 - lw1))
    return n_total - n2, n2


def resolve_state(junction: Junction, temperature: float, n_neq_total: float) -> QuasiparticleState:
    """Combine the thermal density of each electrode with its share of the nonequilibrium density."""
    p1, p2 = partition_nonequilibrium(junction, n_neq_total, temperature)
    return QuasiparticleState(
        temperature=temperature,
        n_neq_total=n_neq_total,
        n1=thermal_qp_density(junction.electrode1, temperature) + p1,
        n2=thermal_qp_density(junction.electrode2, temperature) + p2,
    )


def _grid_qp_current(junction: Junction, bias: np.ndarray, temperature: float, step: float) -> np.ndarray:
    profile1 = simulation_profile(junction.electrode1, temperature)
    profile2 = simulation_profile(junction.electrode2, temperature)
    kt = CONSTANTS.k_b * temperature
    reach = float(np.max(np.abs(bias))) + TAIL_KT * kt + 2 * step
    half = math.ceil(reach / step)
    energy = np.arange(-half, half + 1) * step
    n = energy.size

    rho1 = cell_averaged_dos(energy, step, profile1)
    rho2 = cell_averaged_dos(energy, step, profile2)
    filled = fermi(energy, temperature)
    empty = fermi(-energy, temperature)

    # I(m·step) = Σ_k ρ₁f₁(E_k)·ρ₂(1 − f₂)(E_k + m·step) − ρ₁(1 − f₁)(E_k)·ρ₂f₂(E_k + m·step)
    forward = fftconvolve(rho2 * empty, (rho1 * filled)[::-1])
    backward = fftconvolve(rho2 * filled, (rho1 * empty)[::-1])
    mesh_bias = (np.arange(2 * n - 1) - (n - 1)) * step
    mesh_current = (forward - backward) * step / junction.rn
    return np.interp(bias, mesh_bias, mesh_current)


def resolve_curve_method(method: CurveMethod, mode: OccupationMode) -> CurveMethod:
    """Pick the evaluator AUTO stands for: GRID for thermal occupation, ADAPTIVE otherwise."""
    if method is not CurveMethod.AUTO:
        return method
    return CurveMethod.GRID if mode is OccupationMode.THERMAL else CurveMethod.ADAPTIVE


def qp_current_curve(
    junction: Junction,
    bias: Sequence[float] | np.ndarray,
    temperature: float,
    occ: OccupationModel,
    *,
    method: CurveMethod = CurveMethod.ADAPTIVE,
    grid_step: float = DEFAULT_GRID_STEP,
) -> np.ndarray:
    """Quasiparticle current in nA over a bias sweep.

    Args:
        junction (Junction): The junction
        bias (Sequence[float]): Biases in μV
        temperature (float): Temperature in K
        occ (OccupationModel): Occupation of both electrodes
        method (CurveMethod): ADAPTIVE evaluates qp_current() per point, GRID the FFT mesh evaluator,
            AUTO the faster of the two that supports the occupation
        grid_step (float): Energy mesh step of the GRID method in μeV

    Returns:
        np.ndarray: Currents in nA, one per bias

    """
    bias = np.asarray(bias, dtype=float)
    if bias.size == 0:
        return np.zeros(0)
    method = resolve_curve_method(method, occ.mode)
    if method is CurveMethod.GRID:
        if occ.mode is not OccupationMode.THERMAL:
            raise ValueError("The grid method supports thermal occupation only.")
        if grid_step <= 0:
            raise ValueError(f"Grid step must be positive, got {grid_step}.")
        return _grid_qp_current(junction, bias, temperature, grid_step)
    func = partial(_qp_current_at, junction, temperature, occ)
    return np.asarray(parallel_map(func, bias.tolist(), kind="bias"), dtype=float)


def _qp_current_at(junction: Junction, temperature: float, occ: OccupationModel, bias: float) -> float:
    return qp_current(junction, bias, temperature, occ)
