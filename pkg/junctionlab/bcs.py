"""BCS primitives: Dynes-broadened density of states, Fermi occupation, gap temperature dependence and
the thermal quasiparticle density.

Energies are in μeV and temperatures in K.
"""

# ruff: noqa: PLR2004

import cmath
import math

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import expit

from junctionlab.exceptions import DegenerateProfileError
from junctionlab.models import Electrode
from junctionlab.units import CONSTANTS

AL_N0 = 1.72e4
TI_N0 = 2.7 * AL_N0
AL_GAP0 = 190.0
TI_GAP0 = 59.0

BCS_RATIO = 1.764
GAP_INTERPOLATION_SLOPE = 1.74

DYNES_DEFAULT_RATIO = 1e-3
DYNES_FLOOR_RATIO = 1e-4


class DosProfile(BaseModel):
    """Parameters of a Dynes density of states at one temperature."""

    model_config = ConfigDict(frozen=True)

    gap: float = Field(ge=0, description="Gap Δ at the evaluation temperature in μeV.")
    dynes: float = Field(ge=0, description="Dynes broadening Γ_D in μeV.")


def default_dynes(gap0: float) -> float:
    """Default Dynes broadening for a gap when none is configured."""
    return DYNES_DEFAULT_RATIO * gap0


def simulation_profile(electrode: Electrode, temperature: float) -> DosProfile:
    """Get the DOS profile used in simulations, with the Dynes floor applied.

    The floor of 10⁻⁴·Δ keeps the tunneling integrands bounded.
    """
    gap = gap_at_temperature(electrode.gap0, temperature)
    return DosProfile(gap=gap, dynes=max(electrode.dynes, DYNES_FLOOR_RATIO * electrode.gap0))


def dos(energy: ArrayLike, profile: DosProfile) -> np.ndarray | float:
    """Reduced Dynes density of states |Re[(E − iΓ)/√((E − iΓ)² − Δ²)]|.

    Even in E, zero inside the gap when Γ = 0, and tends to 1 far from the gap.
    Defined as 1 everywhere for a vanishing gap.
    """
    e = np.asarray(energy, dtype=float)
    if profile.gap == 0:
        if profile.dynes == 0 and np.any(e == 0):
            raise DegenerateProfileError("The DOS is indeterminate at E = 0 for Δ = 0 and Γ_D = 0.")
        result = np.ones_like(e)
    else:
        # Evaluate on |E| so the result is exactly even
        a = np.abs(e)
        z = a - 1j * profile.dynes
        w = (a - profile.gap) * (a + profile.gap) - profile.dynes**2 - 2j * a * profile.dynes
        with np.errstate(divide="ignore", invalid="ignore"):
            result = np.abs(np.real(z / np.sqrt(w)))
        result = np.where(np.isnan(result), np.inf, result)
    return float(result) if result.ndim == 0 else result


def dos_scalar(energy: float, gap: float, dynes: float) -> float:
    """Scalar form of dos() for quadrature integrands. Assumes gap > 0 or dynes > 0."""
    if gap == 0:
        return 1.0
    a = abs(energy)
    w = complex((a - gap) * (a + gap) - dynes * dynes, -2.0 * a * dynes)
    root = cmath.sqrt(w)
    if root == 0:
        return math.inf
    return abs((complex(a, -dynes) / root).real)


def integrated_dos(energy: ArrayLike, profile: DosProfile) -> np.ndarray:
    """Antiderivative of the Dynes DOS, Re√((E − iΓ)² − Δ²) on the branch continuous along the real axis."""
    e = np.asarray(energy, dtype=float)
    if profile.gap == 0:
        return e.copy()
    if profile.dynes == 0:
        return np.sign(e) * np.sqrt(np.maximum((e - profile.gap) * (e + profile.gap), 0.0))
    z = e - 1j * profile.dynes
    return np.real(z * np.sqrt(1.0 - (profile.gap / z) ** 2))


def cell_averaged_dos(energy: ArrayLike, step: float, profile: DosProfile) -> np.ndarray:
    """Exact average of the DOS over cells of width step centred on the given energies."""
    e = np.asarray(energy, dtype=float)
    return (integrated_dos(e + step / 2, profile) - integrated_dos(e - step / 2, profile)) / step


def fermi(energy: ArrayLike, temperature: float) -> np.ndarray | float:
    """Fermi occupation 1/(1 + exp(E/k_B·T)), free of overflow for any finite E."""
    x = np.asarray(energy, dtype=float) / (CONSTANTS.k_b * temperature)
    result = expit(-x)
    return float(result) if np.ndim(result) == 0 else result


def log_fermi(energy: ArrayLike, temperature: float) -> np.ndarray | float:
    """Natural log of the Fermi occupation, accurate deep in the tail."""
    x = np.asarray(energy, dtype=float) / (CONSTANTS.k_b * temperature)
    result = -np.logaddexp(0.0, x)
    return float(result) if np.ndim(result) == 0 else result


def fermi_scalar(energy: float, kt: float) -> float:
    """Scalar Fermi occupation with k_B·T given in μeV."""
    x = energy / kt
    if x >= 0:
        t = math.exp(-x)
        return t / (1.0 + t)
    return 1.0 / (1.0 + math.exp(x))


def log_fermi_scalar(energy: float, kt: float) -> float:
    """Scalar log of the Fermi occupation with k_B·T given in μeV."""
    x = energy / kt
    if x >= 0:
        return -x - math.log1p(math.exp(-x))
    return -math.log1p(math.exp(x))


def tc_from_gap(gap0: float) -> float:
    """Critical temperature in K from the BCS relation Δ₀ = 1.764·k_B·T_c."""
    return gap0 / (BCS_RATIO * CONSTANTS.k_b)


def gap_at_temperature(gap0: float, temperature: float) -> float:
    """Gap at a temperature from the interpolation Δ₀·tanh(1.74·√(T_c/T − 1)).

    Args:
        gap0 (float): Zero-temperature gap in μeV
        temperature (float): Temperature in K

    Returns:
        float: Gap in μeV, 0 at and above T_c

    """
    if gap0 <= 0:
        return 0.0
    if temperature <= 0:
        return gap0
    tc = tc_from_gap(gap0)
    if temperature >= tc:
        return 0.0
    return gap0 * math.tanh(GAP_INTERPOLATION_SLOPE * math.sqrt(tc / temperature - 1))


def log_thermal_qp_density(electrode: Electrode, temperature: float) -> float:
    """Natural log of thermal_qp_density(), usable where the density itself underflows."""
    gap = gap_at_temperature(electrode.gap0, temperature)
    kt = CONSTANTS.k_b * temperature
    if gap == 0:
        return -math.inf
    return math.log(2 * electrode.n0) + 0.5 * math.log(2 * math.pi * kt * gap) - gap / kt


def thermal_qp_density(electrode: Electrode, temperature: float) -> float:
    """Thermal quasiparticle density 2·n0·√(2π·k_B·T·Δ)·exp(−Δ/k_B·T) in μm⁻³.

    Args:
        electrode (Electrode): The electrode, gap0 must be positive
        temperature (float): Temperature in K

    Returns:
        float: Density in μm⁻³

    """
    return math.exp(log_thermal_qp_density(electrode, temperature))
