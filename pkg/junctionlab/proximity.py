"""Effective gap of a superconducting bilayer counter-electrode in the Cooper limit.

In the thin-film limit the bilayer carries a single gap, the average of the layer gaps weighted by
n0·thickness. An interface coupling τ interpolates linearly between the decoupled layer a (τ = 0)
and that average (τ = 1).
"""

import csv
import logging
from collections import defaultdict
from collections.abc import Sequence
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from junctionlab.bcs import tc_from_gap
from junctionlab.exceptions import OutOfRangeError, ParseError
from junctionlab.models import Electrode

logger = logging.getLogger(__name__)

JUNCTION_TABLE_COLUMNS = ("composition", "o2_dose_mbar_min", "delta2_ueV", "rn_kohm")


class BilayerSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    layer_a: Electrode = Field(description="The layer facing the barrier, e.g. Al.")
    layer_b: Electrode = Field(description="The capping layer, e.g. Ti.")
    coupling: float = Field(1.0, ge=0, le=1, description="Interface coupling τ, 1 for a clean contact.")


def _coupled_gap(spec: BilayerSpec) -> float:
    weight_a = spec.layer_a.n0 * spec.layer_a.thickness
    weight_b = spec.layer_b.n0 * spec.layer_b.thickness
    return (weight_a * spec.layer_a.gap0 + weight_b * spec.layer_b.gap0) / (weight_a + weight_b)


def cooper_limit_gap(spec: BilayerSpec) -> float:
    """Effective gap (1 − τ)·Δ_a + τ·Δ_eff(1) in μeV.

    Δ_eff(1) = (n0_a·d_a·Δ_a + n0_b·d_b·Δ_b) / (n0_a·d_a + n0_b·d_b).
    """
    return (1 - spec.coupling) * spec.layer_a.gap0 + spec.coupling * _coupled_gap(spec)


def calibrate_coupling(spec: BilayerSpec, measured_gap: float) -> float:
    """Invert cooper_limit_gap() for the coupling that reproduces a measured gap.

    The coupling set on the bilayer itself is ignored.

    Raises:
        OutOfRangeError: If the gap lies outside the interval between Δ_eff(1) and Δ_a.

    """
    gap_a = spec.layer_a.gap0
    coupled = _coupled_gap(spec)
    low, high = min(gap_a, coupled), max(gap_a, coupled)
    if not low <= measured_gap <= high:
        raise OutOfRangeError(
            f"A gap of {measured_gap:g} μeV is outside the attainable range [{low:.6g}, {high:.6g}] μeV.",
        )
    if coupled == gap_a:
        return 0.0
    return (gap_a - measured_gap) / (gap_a - coupled)


def bilayer_tc(spec: BilayerSpec) -> float:
    """Critical temperature in K of the bilayer from its effective gap and the BCS ratio."""
    return tc_from_gap(cooper_limit_gap(spec))


class JunctionRecord(BaseModel):
    """A fabricated junction: composition, O₂ disorder dose, counter-electrode gap and resistance."""

    model_config = ConfigDict(frozen=True)

    composition: str
    o2_dose: float | None = Field(description="O₂ disorder dose in mbar·min, None without a disorder layer.")
    delta2: float = Field(gt=0, description="Counter-electrode gap in μeV.")
    rn: float = Field(gt=0, description="Normal-state resistance in kΩ.")


def _optional_number(value: str) -> float | None:
    value = value.strip()
    if value in {"", "-"}:
        return None
    return float(value)


def load_junction_table(path: Path) -> list[JunctionRecord]:
    """Load a junction table with the columns composition, o2_dose_mbar_min, delta2_ueV, rn_kohm.

    Lines starting with # are comments. A dose of - means no disorder layer.
    """
    rows = []
    with path.open(encoding="utf-8", newline="") as f:
        lines = [(nr, line) for nr, line in enumerate(f, start=1) if line.strip() and not line.startswith("#")]
    reader = csv.reader(line for _, line in lines)
    header = None
    for (line_nr, _), record in zip(lines, reader, strict=True):
        fields = [v.strip() for v in record]
        if header is None:
            if tuple(fields) != JUNCTION_TABLE_COLUMNS:
                raise ParseError(f"Expected the header {','.join(JUNCTION_TABLE_COLUMNS)}.", line=line_nr)
            header = fields
            continue
        if len(fields) != len(JUNCTION_TABLE_COLUMNS):
            raise ParseError(f"Expected {len(JUNCTION_TABLE_COLUMNS)} columns, got {len(fields)}.", line=line_nr)
        try:
            rows.append(
                JunctionRecord(
                    composition=fields[0],
                    o2_dose=_optional_number(fields[1]),
                    delta2=float(fields[2]),
                    rn=float(fields[3]),
                ),
            )
        except (ValueError, ValidationError) as exc:
            raise ParseError(str(exc), line=line_nr) from None
    if header is None:
        raise ParseError("The table is empty.", line=1)
    return rows


def coupling_by_dose(spec: BilayerSpec, rows: Sequence[JunctionRecord]) -> dict[float, float | None]:
    """Calibrate the coupling of every row with a disorder dose and average it per dose.

    A row whose gap the bilayer cannot reach is logged and left out; a dose without any reachable
    row maps to None.
    """
    couplings: dict[float, list[float]] = defaultdict(list)
    doses: list[float] = []
    for row in rows:
        if row.o2_dose is None:
            continue
        if row.o2_dose not in doses:
            doses.append(row.o2_dose)
        try:
            couplings[row.o2_dose].append(calibrate_coupling(spec, row.delta2))
        except OutOfRangeError as exc:
            logger.warning("Skipping %s at %g mbar·min: %s", row.composition, row.o2_dose, exc)
    return {
        dose: sum(couplings[dose]) / len(couplings[dose]) if couplings[dose] else None
        for dose in sorted(doses)
    }
