"""Reading and writing of measured traces, and conversion between dI/dV and IV curves.

Trace files are UTF-8 comma-separated values. Lines starting with # are comments; one of them must
be the unit header naming each column as <name>_<unit>, e.g. "# bias_uV, didv_uS". The signal
column is named didv (a conductance) or current.
"""

import csv
import logging
import math
import re
from enum import Enum
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.integrate import cumulative_trapezoid

from junctionlab.exceptions import AnchorOutOfRangeError, ParseError, TooFewSamplesError, UnitError
from junctionlab.models import ConductanceCurve, IVCurve
from junctionlab.units import Dimension, Unit, parse_unit, unit_convert

logger = logging.getLogger(__name__)

HEADER_TOKEN = re.compile(r"^(?P<name>[A-Za-z]+)_(?P<unit>\S+)$")
MANIFEST_PREFIX = "manifest:"

# ASCII tags of the internal units, as written in output headers
_OUTPUT_TAGS = {Unit.MICROVOLT: "uV", Unit.NANOAMPERE: "nA", Unit.MICROSIEMENS: "uS"}


class SignalKind(Enum):
    DIDV = "didv"
    CURRENT = "current"

    @property
    def internal_unit(self) -> Unit:
        return Unit.MICROSIEMENS if self is SignalKind.DIDV else Unit.NANOAMPERE


class TraceFile(BaseModel):
    """A trace file and how to read it.

    Column positions and units default to what the unit header declares.
    """

    model_config = ConfigDict(frozen=True)

    path: Path
    bias_column: int | None = Field(None, ge=0)
    signal_column: int | None = Field(None, ge=0)
    bias_unit: Unit | None = None
    signal_unit: Unit | None = None
    signal: SignalKind | None = None
    gain: float = Field(1.0, gt=0, description="Factor the raw signal is multiplied by, e.g. a lock-in sensitivity.")

    @model_validator(mode="after")
    def _check_columns(self) -> "TraceFile":
        if self.bias_column is not None and self.bias_column == self.signal_column:
            raise ValueError("Bias and signal columns must differ.")
        return self


class _Header(BaseModel):
    bias_column: int
    bias_unit: Unit
    signal_column: int
    signal_unit: Unit
    signal: SignalKind


def _parse_header(text: str, line_nr: int) -> _Header | None:
    tokens = [t.strip() for t in text.lstrip("#").split(",")]
    matches = [HEADER_TOKEN.match(t) for t in tokens]
    if len(tokens) < 2 or not all(matches) or matches[0]["name"] != "bias":  # noqa: PLR2004
        return None
    bias_unit = parse_unit(matches[0]["unit"])
    for column, match in enumerate(matches[1:], start=1):
        if match["name"] in {kind.value for kind in SignalKind}:
            return _Header(
                bias_column=0,
                bias_unit=bias_unit,
                signal_column=column,
                signal_unit=parse_unit(match["unit"]),
                signal=SignalKind(match["name"]),
            )
    raise ParseError("The unit header names no didv or current column.", line=line_nr)


def _check_dimension(unit: Unit, dimension: Dimension, what: str) -> None:
    if unit.dimension is not dimension:
        raise UnitError(f"The {what} column has unit {unit.value}, expected a {dimension.value} unit.")


def load_trace(file: TraceFile) -> ConductanceCurve | IVCurve:
    """Load a trace, normalised to internal units, sorted by bias, with duplicate biases averaged.

    Raises:
        ParseError: On a malformed row or a missing header, with the line (and column) number.
        UnitError: On an unknown unit tag or a unit of the wrong dimension.

    """
    header: _Header | None = None
    label = file.path.stem
    rows: list[tuple[int, str]] = []
    with file.path.open(encoding="utf-8", newline="") as f:
        for line_nr, line in enumerate(f, start=1):
            stripped = line.strip()
            if len(stripped) == 0:
                continue
            if stripped.startswith("#"):
                if stripped.startswith("# label:"):
                    label = stripped.removeprefix("# label:").strip()
                elif header is None:
                    header = _parse_header(stripped, line_nr)
                continue
            rows.append((line_nr, stripped))

    bias_column = file.bias_column if file.bias_column is not None else (header.bias_column if header else 0)
    signal_column = file.signal_column if file.signal_column is not None else (header.signal_column if header else 1)
    bias_unit = file.bias_unit or (header.bias_unit if header else None)
    signal_unit = file.signal_unit or (header.signal_unit if header else None)
    signal = file.signal or (header.signal if header else None)
    if bias_unit is None or signal_unit is None or signal is None:
        raise ParseError("Missing unit header, expected e.g. '# bias_uV, didv_uS'.", line=1)
    _check_dimension(bias_unit, Dimension.VOLTAGE, "bias")
    _check_dimension(signal_unit, Dimension.CONDUCTANCE if signal is SignalKind.DIDV else Dimension.CURRENT, "signal")

    bias_values = []
    signal_values = []
    needed = max(bias_column, signal_column) + 1
    for (line_nr, _), record in zip(rows, csv.reader(r for _, r in rows), strict=True):
        if len(record) < needed:
            raise ParseError(f"Expected at least {needed} columns, got {len(record)}.", line=line_nr)
        values = []
        for column in (bias_column, signal_column):
            try:
                value = float(record[column])
            except ValueError:
                message = f"Not a number: '{record[column].strip()}'."
                raise ParseError(message, line=line_nr, column=column + 1) from None
            if not math.isfinite(value):
                raise ParseError(f"Non-finite value '{record[column].strip()}'.", line=line_nr, column=column + 1)
            values.append(value)
        bias_values.append(unit_convert(values[0], bias_unit, Unit.MICROVOLT))
        signal_values.append(unit_convert(values[1], signal_unit, signal.internal_unit) * file.gain)
    if len(bias_values) == 0:
        raise ParseError("The file holds no data rows.", line=1)

    bias, inverse, counts = np.unique(np.asarray(bias_values), return_inverse=True, return_counts=True)
    averaged = np.bincount(inverse, weights=np.asarray(signal_values)) / counts
    if len(bias) < len(bias_values):
        logger.debug("Averaged %d duplicate bias rows in %s.", len(bias_values) - len(bias), file.path)
    if signal is SignalKind.DIDV:
        return ConductanceCurve.from_arrays(bias, averaged, label=label)
    return IVCurve.from_arrays(bias, averaged, label=label)


def write_curve(path: Path, curve: IVCurve | ConductanceCurve, manifest_name: str | None = None) -> None:
    """Write a curve in the trace format with 17 significant digits, optionally naming its manifest."""
    if isinstance(curve, IVCurve):
        kind, values = SignalKind.CURRENT, curve.current
    else:
        kind, values = SignalKind.DIDV, curve.didv
    lines = []
    if manifest_name is not None:
        lines.append(f"# {MANIFEST_PREFIX} {manifest_name}\n")
    if curve.label:
        lines.append(f"# label: {curve.label}\n")
    lines.append(f"# bias_{_OUTPUT_TAGS[Unit.MICROVOLT]}, {kind.value}_{_OUTPUT_TAGS[kind.internal_unit]}\n")
    lines.extend(f"{v:.17g},{s:.17g}\n" for v, s in zip(curve.bias, values, strict=True))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(lines), encoding="utf-8")


def integrate_conductance(g: ConductanceCurve, anchor: tuple[float, float] = (0.0, 0.0)) -> IVCurve:
    """Integrate dI/dV over bias with the trapezoid rule, shifted so that I(V₀) = I₀.

    Args:
        g (ConductanceCurve): The conductance trace
        anchor (tuple[float, float]): (V₀ in μV, I₀ in nA)

    Returns:
        IVCurve: The IV curve on the same bias grid

    Raises:
        AnchorOutOfRangeError: If V₀ is outside the bias range.

    """
    bias = g.bias_array
    v0, i0 = anchor
    if not bias[0] <= v0 <= bias[-1]:
        raise AnchorOutOfRangeError(f"Anchor bias {v0:g} μV is outside [{bias[0]:g}, {bias[-1]:g}] μV.")
    # μS·μV = pA
    cumulative = cumulative_trapezoid(g.didv_array, bias, initial=0.0) * 1e-3
    current = cumulative - np.interp(v0, bias, cumulative) + i0
    return IVCurve.from_arrays(bias, current, label=g.label)


def differentiate_iv(iv: IVCurve) -> ConductanceCurve:
    """Differentiate an IV curve: central differences inside, one-sided at the ends.

    Raises:
        TooFewSamplesError: For fewer than 3 samples.

    """
    if len(iv.bias) < 3:  # noqa: PLR2004
        raise TooFewSamplesError(f"Need at least 3 samples to differentiate, got {len(iv.bias)}.")
    # nA/μV = 1000 μS
    didv = np.gradient(iv.current_array, iv.bias_array) * 1e3
    return ConductanceCurve.from_arrays(iv.bias, didv, label=iv.label)


def as_iv(curve: IVCurve | ConductanceCurve, anchor: tuple[float, float] = (0.0, 0.0)) -> IVCurve:
    """Get an IV curve, integrating a conductance trace if needed."""
    if isinstance(curve, IVCurve):
        return curve
    return integrate_conductance(curve, anchor)
