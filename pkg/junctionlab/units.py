"""Physical constants and the fixed set of unit tags.

Internal convention: energies in μeV, voltages in μV, currents in nA, conductances in μS,
temperatures in K, resistances in kΩ and densities in μm⁻³. Voltage and energy scales are
identified through e·(1 μV) = 1 μeV.
"""

from decimal import Decimal
from enum import Enum

import scipy.constants as const
from pydantic import BaseModel, ConfigDict, Field

from junctionlab.exceptions import DimensionMismatchError, UnitError


class Dimension(Enum):
    VOLTAGE = "voltage"
    CURRENT = "current"
    ENERGY = "energy"
    TEMPERATURE = "temperature"
    RESISTANCE = "resistance"
    CONDUCTANCE = "conductance"


class Unit(Enum):
    """Supported unit tags. The value is the canonical tag as written in files and configs."""

    MICROVOLT = "μV"
    MILLIVOLT = "mV"
    VOLT = "V"
    NANOAMPERE = "nA"
    MICROAMPERE = "μA"
    MICROELECTRONVOLT = "μeV"
    MILLIELECTRONVOLT = "meV"
    KELVIN = "K"
    MILLIKELVIN = "mK"
    KILOOHM = "kΩ"
    OHM = "Ω"
    MICROSIEMENS = "μS"
    SIEMENS = "S"

    @property
    def dimension(self) -> Dimension:
        """Physical dimension of the unit."""
        return _UNIT_SCALES[self][0]

    @property
    def exponent(self) -> int:
        """Power of ten relative to the SI base unit of its dimension."""
        return _UNIT_SCALES[self][1]


_UNIT_SCALES: dict[Unit, tuple[Dimension, int]] = {
    Unit.MICROVOLT: (Dimension.VOLTAGE, -6),
    Unit.MILLIVOLT: (Dimension.VOLTAGE, -3),
    Unit.VOLT: (Dimension.VOLTAGE, 0),
    Unit.NANOAMPERE: (Dimension.CURRENT, -9),
    Unit.MICROAMPERE: (Dimension.CURRENT, -6),
    Unit.MICROELECTRONVOLT: (Dimension.ENERGY, -6),
    Unit.MILLIELECTRONVOLT: (Dimension.ENERGY, -3),
    Unit.KELVIN: (Dimension.TEMPERATURE, 0),
    Unit.MILLIKELVIN: (Dimension.TEMPERATURE, -3),
    Unit.KILOOHM: (Dimension.RESISTANCE, 3),
    Unit.OHM: (Dimension.RESISTANCE, 0),
    Unit.MICROSIEMENS: (Dimension.CONDUCTANCE, -6),
    Unit.SIEMENS: (Dimension.CONDUCTANCE, 0),
}

# Plain-ASCII spellings accepted in file headers and configs
_ALIASES: dict[str, Unit] = {
    "uV": Unit.MICROVOLT,
    "uA": Unit.MICROAMPERE,
    "ueV": Unit.MICROELECTRONVOLT,
    "uS": Unit.MICROSIEMENS,
    "kOhm": Unit.KILOOHM,
    "Ohm": Unit.OHM,
    "µV": Unit.MICROVOLT,
    "µA": Unit.MICROAMPERE,
    "µeV": Unit.MICROELECTRONVOLT,
    "µS": Unit.MICROSIEMENS,
}

# Internal unit per dimension
INTERNAL_UNITS: dict[Dimension, Unit] = {
    Dimension.VOLTAGE: Unit.MICROVOLT,
    Dimension.CURRENT: Unit.NANOAMPERE,
    Dimension.ENERGY: Unit.MICROELECTRONVOLT,
    Dimension.TEMPERATURE: Unit.KELVIN,
    Dimension.RESISTANCE: Unit.KILOOHM,
    Dimension.CONDUCTANCE: Unit.MICROSIEMENS,
}


def parse_unit(tag: str) -> Unit:
    """Parse a unit tag, accepting the ASCII aliases."""
    tag = tag.strip()
    if tag in _ALIASES:
        return _ALIASES[tag]
    try:
        return Unit(tag)
    except ValueError:
        raise UnitError(f"Unknown unit tag '{tag}'.") from None


def unit_convert(value: float, from_unit: Unit, to_unit: Unit) -> float:
    """Convert a value between two units of the same dimension.

    The scaling is done on the shortest decimal representation of the value, so converting
    back and forth reproduces the input exactly for any value with up to 15 significant digits.

    Args:
        value (float): The value in from_unit
        from_unit (Unit): Unit of the value
        to_unit (Unit): Target unit

    Returns:
        float: The value in to_unit

    """
    if from_unit.dimension is not to_unit.dimension:
        raise DimensionMismatchError(
            f"Cannot convert {from_unit.value} ({from_unit.dimension.value}) "
            f"to {to_unit.value} ({to_unit.dimension.value}).",
        )
    shift = from_unit.exponent - to_unit.exponent
    if shift == 0:
        return value
    return float(Decimal(repr(float(value))).scaleb(shift))


def to_internal(value: float, unit: Unit) -> float:
    """Convert a value to the internal unit of its dimension."""
    return unit_convert(value, unit, INTERNAL_UNITS[unit.dimension])


class PhysicalConstants(BaseModel):
    """CODATA constants expressed in the internal unit system."""

    model_config = ConfigDict(frozen=True)

    e: float = Field(description="Elementary charge in C. Only used to turn nA into charges per second.")
    h: float = Field(description="Planck constant in μeV/GHz.")
    k_b: float = Field(description="Boltzmann constant in μeV/K.")

    @property
    def charges_per_second_per_na(self) -> float:
        """Number of elementary charges per second carried by 1 nA."""
        return 1e-9 / self.e


CONSTANTS = PhysicalConstants(
    e=const.e,
    h=const.h / const.e * 1e6 * 1e9,
    k_b=const.k / const.e * 1e6,
)
