"""Pydantic data models for the shared domain types.

All models are frozen value types. Units follow the internal convention documented in
junctionlab.units.
"""

import math
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from junctionlab.units import CONSTANTS


class Electrode(BaseModel):
    model_config = ConfigDict(frozen=True)

    gap0: float = Field(ge=0, description="Zero-temperature gap Δ₀ in μeV.", examples=[190])
    dynes: float = Field(0.0, ge=0, description="Dynes broadening Γ_D in μeV.", examples=[0.19])
    n0: float = Field(
        1.72e4,
        gt=0,
        description="Single-spin density of states at the Fermi level in μeV⁻¹·μm⁻³.",
        examples=[1.72e4],
    )
    thickness: float = Field(30.0, gt=0, description="Film thickness in nm.", examples=[30])


class Junction(BaseModel):
    model_config = ConfigDict(frozen=True)

    electrode1: Electrode = Field(description="Bottom electrode, the fixed-gap side.")
    electrode2: Electrode = Field(description="Counter-electrode.")
    rn: float = Field(gt=0, description="Normal-state resistance in kΩ.", examples=[18.6])
    transparency: float = Field(0.0, ge=0, le=1, description="Barrier transparency D = |t|².", examples=[0.05])

    def electrode(self, index: int) -> Electrode:
        """Get an electrode by its 1-based index."""
        if index == 1:
            return self.electrode1
        if index == 2:  # noqa: PLR2004
            return self.electrode2
        raise ValueError(f"Electrode index must be 1 or 2, got {index}.")


class QuasiparticleState(BaseModel):
    model_config = ConfigDict(frozen=True)

    temperature: float = Field(gt=0, description="Temperature in K.")
    n_neq_total: float = Field(
        0.0,
        ge=0,
        description="Total nonequilibrium quasiparticle density shared between the electrodes, in μm⁻³.",
    )
    n1: float = Field(ge=0, description="Quasiparticle density in electrode 1 (thermal + nonequilibrium), in μm⁻³.")
    n2: float = Field(ge=0, description="Quasiparticle density in electrode 2 (thermal + nonequilibrium), in μm⁻³.")

    def density(self, index: int) -> float:
        """Get the resolved density of an electrode by its 1-based index."""
        return self.n1 if index == 1 else self.n2


class TransmonParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    ec: float = Field(gt=0, description="Charging energy E_C in μeV.", examples=[1.034])
    fge: float = Field(gt=0, description="Qubit transition frequency f_ge in GHz.", examples=[5.1])

    @property
    def photon_energy(self) -> float:
        """The qubit photon energy h·f_ge in μeV, equal to the equivalent bias in μV."""
        return CONSTANTS.h * self.fge


def _trace_violations(bias: Sequence[float], signal: Sequence[float], signal_name: str) -> list[str]:
    violations = []
    if len(bias) != len(signal):
        violations.append(f"length mismatch: {len(bias)} bias samples but {len(signal)} {signal_name} samples")
    for i, value in enumerate(bias):
        if not math.isfinite(value):
            violations.append(f"non-finite sample: bias[{i}] = {value}")
    for i, value in enumerate(signal):
        if not math.isfinite(value):
            violations.append(f"non-finite sample: {signal_name}[{i}] = {value}")
    for i in range(1, len(bias)):
        if not bias[i] > bias[i - 1]:
            violations.append(f"non-strict monotonicity: bias[{i}] = {bias[i]} after bias[{i - 1}] = {bias[i - 1]}")
    return violations


class IVCurve(BaseModel):
    """A sampled current-voltage trace; bias in μV, current in nA."""

    model_config = ConfigDict(frozen=True)

    bias: tuple[float, ...] = Field(description="Bias voltages in μV, strictly increasing.")
    current: tuple[float, ...] = Field(description="Currents in nA.")
    label: str = Field("", description="Free text metadata.")

    @model_validator(mode="after")
    def _check_invariants(self) -> "IVCurve":
        violations = _trace_violations(self.bias, self.current, "current")
        if violations:
            raise ValueError("; ".join(violations))
        return self

    @property
    def bias_array(self) -> np.ndarray:
        return np.asarray(self.bias, dtype=float)

    @property
    def current_array(self) -> np.ndarray:
        return np.asarray(self.current, dtype=float)

    @staticmethod
    def from_arrays(bias: Sequence[float], current: Sequence[float], label: str = "") -> "IVCurve":
        """Build a curve from array-likes."""
        return IVCurve(
            bias=tuple(float(v) for v in bias),
            current=tuple(float(i) for i in current),
            label=label,
        )


class ConductanceCurve(BaseModel):
    """A sampled differential conductance trace; bias in μV, dI/dV in μS."""

    model_config = ConfigDict(frozen=True)

    bias: tuple[float, ...] = Field(description="Bias voltages in μV, strictly increasing.")
    didv: tuple[float, ...] = Field(description="Differential conductance in μS.")
    label: str = Field("", description="Free text metadata.")

    @model_validator(mode="after")
    def _check_invariants(self) -> "ConductanceCurve":
        violations = _trace_violations(self.bias, self.didv, "didv")
        if violations:
            raise ValueError("; ".join(violations))
        return self

    @property
    def bias_array(self) -> np.ndarray:
        return np.asarray(self.bias, dtype=float)

    @property
    def didv_array(self) -> np.ndarray:
        return np.asarray(self.didv, dtype=float)

    @staticmethod
    def from_arrays(bias: Sequence[float], didv: Sequence[float], label: str = "") -> "ConductanceCurve":
        """Build a curve from array-likes."""
        return ConductanceCurve(
            bias=tuple(float(v) for v in bias),
            didv=tuple(float(g) for g in didv),
            label=label,
        )


def validate_iv(curve: IVCurve) -> list[str]:
    """Collect every invariant violation of an IV curve.

    Curves built through the constructor never violate their invariants; this is meant for
    unvalidated instances (e.g. from IVCurve.model_construct) and returns an empty list when the
    curve is ok.
    """
    return _trace_violations(tuple(curve.bias), tuple(curve.current), "current")
