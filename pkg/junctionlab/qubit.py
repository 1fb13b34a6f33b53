"""Quasiparticle-induced transmon relaxation.

The decay rate is Γ = (E_C / h·f_ge)·(I_fwd + I_bwd)/e, with the directional quasiparticle currents
evaluated at the static bias eV = h·f_ge.
"""

import logging
import math
from collections.abc import Sequence
from functools import partial

import scipy.constants as const
from pydantic import BaseModel, ConfigDict, Field

from junctionlab.bcs import gap_at_temperature
from junctionlab.exceptions import SweepPointError
from junctionlab.models import Junction, QuasiparticleState, TransmonParams
from junctionlab.sweep import parallel_map
from junctionlab.tunneling import OccupationMode, OccupationModel, directional_currents, resolve_state
from junctionlab.units import CONSTANTS

logger = logging.getLogger(__name__)

# Relative tolerance of the SI cross-check of the rate prefactor
UNIT_AUDIT_RTOL = 1e-9


class DecayResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    gamma: float = Field(ge=0, description="Relaxation rate Γ in s⁻¹.")
    t1: float = Field(gt=0, description="Relaxation time in μs, inf for a vanishing rate.")
    i_fwd: float = Field(ge=0, description="Forward quasiparticle current in nA.")
    i_bwd: float = Field(ge=0, description="Backward quasiparticle current in nA.")


class ReferenceTransmon(BaseModel):
    model_config = ConfigDict(frozen=True)

    composition: str
    fge: float = Field(description="Qubit frequency in GHz.")
    t1_mean: float = Field(description="Mean measured T1 at base temperature in μs.")


MEASURED_TRANSMONS = (
    ReferenceTransmon(composition="Al/AlOx/Al", fge=2.7, t1_mean=134),
    ReferenceTransmon(composition="Al/AlOx/Al/Ti", fge=5.1, t1_mean=1),
    ReferenceTransmon(composition="Al/AlOx/Al/AlOy/Ti", fge=4.0, t1_mean=32),
)


def reference_transmon(fge: float) -> ReferenceTransmon | None:
    """Find the measured device at the given qubit frequency in GHz, if any."""
    for reference in MEASURED_TRANSMONS:
        if math.isclose(reference.fge, fge, rel_tol=1e-6):
            return reference
    return None


def ec_from_frequency(ec_ghz: float) -> float:
    """Convert a charging energy E_C/h in GHz to μeV."""
    return CONSTANTS.h * ec_ghz


def _audit_rate(q: TransmonParams, total_current: float, gamma: float) -> None:
    # Same rate from SI quantities: (E_C [J] / h·f [J])·(I [A] / e [C])
    ec_joule = q.ec * 1e-6 * const.e
    photon_joule = const.h * q.fge * 1e9
    expected = ec_joule / photon_joule * (total_current * 1e-9 / const.e)
    if not math.isclose(gamma, expected, rel_tol=UNIT_AUDIT_RTOL, abs_tol=0.0):
        raise ArithmeticError(f"Rate unit audit failed: {gamma!r} s⁻¹ against {expected!r} s⁻¹.")


def decay_from_currents(q: TransmonParams, i_fwd: float, i_bwd: float) -> DecayResult:
    """Build the decay rate and T1 from given directional currents in nA."""
    total = i_fwd + i_bwd
    gamma = q.ec / q.photon_energy * total * CONSTANTS.charges_per_second_per_na
    _audit_rate(q, total, gamma)
    t1 = 1e6 / gamma if gamma > 0 else math.inf
    return DecayResult(gamma=gamma, t1=t1, i_fwd=i_fwd, i_bwd=i_bwd)


def qp_decay_rate(
    q: TransmonParams,
    j: Junction,
    state: QuasiparticleState,
    occ_mode: OccupationMode = OccupationMode.NONEQUILIBRIUM,
) -> DecayResult:
    """Relaxation rate of the qubit from quasiparticle tunneling through its junction.

    Args:
        q (TransmonParams): The qubit
        j (Junction): Its junction
        state (QuasiparticleState): Resolved densities of both electrodes
        occ_mode (OccupationMode): THERMAL ignores the densities, NONEQUILIBRIUM scales the occupations to them

    Returns:
        DecayResult: Rate, T1 and the currents used

    """
    occ = OccupationModel.from_state(state, occ_mode)
    i_fwd, i_bwd = directional_currents(j, q.photon_energy, state.temperature, occ)
    return decay_from_currents(q, i_fwd, i_bwd)


def gap_asymmetry_protected(j: Junction, q: TransmonParams, temperature: float) -> bool:
    """Check whether the gap difference exceeds the qubit photon energy, |Δ₁ − Δ₂| > h·f_ge."""
    gap1 = gap_at_temperature(j.electrode1.gap0, temperature)
    gap2 = gap_at_temperature(j.electrode2.gap0, temperature)
    return abs(gap1 - gap2) > q.photon_energy


def _sweep_point(
    q: TransmonParams,
    j: Junction,
    n_neq_total: float,
    occ_mode: OccupationMode,
    temperature: float,
) -> DecayResult:
    try:
        return qp_decay_rate(q, j, resolve_state(j, temperature, n_neq_total), occ_mode)
    except Exception as exc:
        raise SweepPointError(temperature, exc) from exc


def t1_vs_temperature(
    q: TransmonParams,
    j: Junction,
    n_neq_total: float,
    temperatures: Sequence[float],
    occ_mode: OccupationMode = OccupationMode.NONEQUILIBRIUM,
) -> list[tuple[float, DecayResult]]:
    """Sweep the decay rate over temperatures in K, strictly increasing and positive.

    Raises:
        SweepPointError: With the failing temperature, if any point fails.

    """
    temperatures = [float(t) for t in temperatures]
    if any(t <= 0 for t in temperatures):
        raise ValueError("Sweep temperatures must be positive.")
    if any(b <= a for a, b in zip(temperatures, temperatures[1:], strict=False)):
        raise ValueError("Sweep temperatures must be strictly increasing.")
    logger.debug("Sweeping T1 over %d temperatures with n_neq = %g μm⁻³.", len(temperatures), n_neq_total)
    results = parallel_map(partial(_sweep_point, q, j, n_neq_total, occ_mode), temperatures, kind="temperature")
    return list(zip(temperatures, results, strict=True))
