"""Run configuration keys accepted in key = value config files.

Every key is registered with a type and a default. Loading a config resolves defaults for missing
keys and rejects unknown keys, so a typo never silently falls back to a default.
"""

from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from junctionlab.bcs import AL_GAP0, AL_N0, TI_GAP0, TI_N0
from junctionlab.exceptions import ConfigError, ParseError
from junctionlab.export import loads_kv


class SettingType(Enum):
    """The type of a config value."""

    NUMBER = "number"
    INTEGER = "integer"
    STRING = "string"
    NUMBER_LIST = "number_list"
    STRING_LIST = "string_list"


@dataclass
class SettingDefinition:
    """A config key with its type and default."""

    key: str
    type: SettingType
    default: str | None
    description: str = ""

    def parse(self, value: str) -> float | int | str | list[float] | list[str] | None:  # noqa: PLR0911
        """Parse a raw value according to the key type."""
        value = value.strip()
        if len(value) == 0:
            return [] if self.type in {SettingType.NUMBER_LIST, SettingType.STRING_LIST} else None
        try:
            if self.type == SettingType.NUMBER:
                return float(value)
            if self.type == SettingType.INTEGER:
                return int(value)
            if self.type == SettingType.NUMBER_LIST:
                return [float(v) for v in value.split(",")]
            if self.type == SettingType.STRING_LIST:
                return [v.strip() for v in value.split(",") if len(v.strip()) > 0]
        except ValueError:
            raise ConfigError(self.key, f"Expected a value of type {self.type.value}, got '{value}'.") from None
        return value


SETTINGS: dict[str, SettingDefinition] = {}


def register_setting(key: str, typ: SettingType, default: str | None, description: str = "") -> None:
    """Register a config key."""
    SETTINGS[key] = SettingDefinition(key, typ, default, description)


def parse_setting(key: str) -> SettingDefinition:
    """Parse a config key."""
    if key not in SETTINGS:
        raise ConfigError(key, "Unknown config key.")
    return SETTINGS[key]


class RunConfig:
    """A resolved run configuration: explicit values merged over registered defaults."""

    def __init__(self, explicit: Mapping[str, str]) -> None:
        """Validate the explicit keys against the registry."""
        for key in explicit:
            parse_setting(key)
        self.explicit = dict(explicit)

    @staticmethod
    def from_file(path: Path) -> "RunConfig":
        """Load a key = value config file."""
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(str(path), f"Failed to read config file: {exc!s}") from exc
        try:
            return RunConfig(loads_kv(text))
        except ParseError as exc:
            raise ConfigError(str(path), str(exc)) from exc

    def raw(self, key: str) -> str | None:
        """Get the raw string value of a key, falling back to its default."""
        definition = parse_setting(key)
        if key in self.explicit:
            return self.explicit[key]
        return definition.default

    def get(self, key: str):  # noqa: ANN201
        """Get the parsed value of a key, falling back to its default."""
        raw = self.raw(key)
        if raw is None:
            return None
        return parse_setting(key).parse(raw)

    def require(self, key: str):  # noqa: ANN201
        """Get the parsed value of a key, failing if neither a value nor a default exists."""
        value = self.get(key)
        if value is None:
            raise ConfigError(key, "A value is required.")
        return value

    def has(self, key: str) -> bool:
        """Check if a key was set explicitly."""
        return key in self.explicit

    def section(self, prefix: str) -> dict[str, str]:
        """Resolve every registered key under a dotted prefix, with the prefix stripped."""
        resolved = {}
        for key in SETTINGS:
            if key.startswith(prefix + "."):
                raw = self.raw(key)
                if raw is not None:
                    resolved[key[len(prefix) + 1 :]] = raw
        return resolved

    def resolved(self, prefixes: tuple[str, ...] = ()) -> dict[str, str]:
        """Dump every key (optionally limited to some prefixes) with its effective value."""
        result = {}
        for key in sorted(SETTINGS):
            if prefixes and not any(key == p or key.startswith(p + ".") for p in prefixes):
                continue
            raw = self.raw(key)
            if raw is not None:
                result[key] = raw
        return result


def _register_electrode(prefix: str, gap0: str, thickness: str) -> None:
    register_setting(f"{prefix}.gap0", SettingType.NUMBER, gap0, "Zero-temperature gap in μeV.")
    register_setting(f"{prefix}.dynes", SettingType.NUMBER, None, "Dynes broadening in μeV (default 10⁻³·gap0).")
    register_setting(f"{prefix}.n0", SettingType.NUMBER, f"{AL_N0:g}", "Single-spin DOS in μeV⁻¹·μm⁻³.")
    register_setting(f"{prefix}.thickness", SettingType.NUMBER, thickness, "Film thickness in nm.")


_register_electrode("junction.electrode1", f"{AL_GAP0:g}", "30")
_register_electrode("junction.electrode2", f"{AL_GAP0:g}", "50")
register_setting("junction.rn", SettingType.NUMBER, "18.6", "Normal-state resistance in kΩ.")
register_setting("junction.transparency", SettingType.NUMBER, "0", "Barrier transparency D.")

register_setting("bias.start", SettingType.NUMBER, "-800", "First bias point in μV.")
register_setting("bias.stop", SettingType.NUMBER, "800", "Last bias point in μV (inclusive).")
register_setting("bias.step", SettingType.NUMBER, "2", "Bias step in μV.")
register_setting("temperature_mk", SettingType.NUMBER, "20", "Temperature in mK.")

register_setting("occupation.mode", SettingType.STRING, "thermal", "thermal or nonequilibrium.")
register_setting("quasiparticles.n_neq_total", SettingType.NUMBER, "1", "Nonequilibrium density in μm⁻³.")

register_setting("mar.n_max", SettingType.INTEGER, "3", "Highest reflection order.")
register_setting("mar.step_width", SettingType.NUMBER, "4", "Logistic step width in μV.")
register_setting("mar.base_scale", SettingType.NUMBER, "0", "First-order step scale in nA.")
register_setting(
    "mar.target_rise",
    SettingType.NUMBER,
    None,
    "Subgap current rise in nA to calibrate base_scale against.",
)
register_setting("mar.rise_window", SettingType.NUMBER_LIST, "100,300", "Bias window in μV of the calibrated rise.")

register_setting(
    "simulation.method",
    SettingType.STRING,
    "auto",
    "auto, adaptive or grid; auto uses grid for thermal occupation and adaptive otherwise.",
)
register_setting("simulation.grid_step", SettingType.NUMBER, "0.5", "Energy mesh step of the grid method in μeV.")
register_setting("simulation.noise", SettingType.NUMBER, "0", "Relative gaussian noise added to the current.")
register_setting("simulation.seed", SettingType.INTEGER, "0", "Noise seed.")
register_setting("simulation.label", SettingType.STRING, "", "Label stored with the curve.")

register_setting("transmon.ec", SettingType.NUMBER, "1.034", "Charging energy E_C in μeV (E_C/h = 250 MHz).")
register_setting("transmon.fge", SettingType.NUMBER, "5.1", "Qubit frequency f_ge in GHz.")
register_setting(
    "sweep.temperatures_mk",
    SettingType.NUMBER_LIST,
    "20,40,60,80,100,120,140,160,180,200",
    "Sweep temperatures in mK.",
)

_register_electrode("bilayer.layer_a", "200", "45")
_register_electrode("bilayer.layer_b", f"{TI_GAP0:g}", "5")
register_setting("bilayer.layer_b.n0", SettingType.NUMBER, f"{TI_N0:g}", "Ti single-spin DOS (2.7× Al).")
register_setting("bilayer.coupling", SettingType.NUMBER, "1", "Interface coupling τ.")
register_setting("proximity.measured_gap", SettingType.NUMBER, None, "Measured gap in μeV to calibrate τ against.")
register_setting("proximity.table", SettingType.STRING, None, "Junction table CSV for the dose → τ lookup.")

register_setting(
    "fit.free",
    SettingType.STRING_LIST,
    "delta2,rn,transparency",
    "Free parameters.",
)
register_setting("fit.objective", SettingType.STRING, "current", "current or conductance.")
register_setting("fit.max_evals", SettingType.INTEGER, "4000", "Evaluation budget per fit.")
register_setting("fit.seed", SettingType.INTEGER, "0", "Restart seed.")
register_setting("fit.restarts", SettingType.INTEGER, "3", "Number of seeded restarts.")
register_setting("fit.grid_step", SettingType.NUMBER, "0.5", "Energy mesh step of the fit model in μeV.")
register_setting("fit.label", SettingType.STRING, "", "Row label in the report.")
register_setting("fit.path", SettingType.STRING, "full-curve", "full-curve or peak.")
for _name, _default, _bounds in (
    ("delta1", "190", "50,400"),
    ("delta2", None, "20,400"),
    ("rn", None, "1,100"),
    ("transparency", "0", "0,1"),
    ("dynes1", "0.19", "0.0001,20"),
    ("dynes2", "0.19", "0.0001,20"),
    ("temperature", "0.02", "0.005,1"),
    ("v_offset", "0", "-50,50"),
    ("i_offset", "0", "-50,50"),
    ("base_scale", "150", "0,2000"),
):
    register_setting(f"fit.fixed.{_name}", SettingType.NUMBER, _default, f"Value of {_name} when not free.")
    register_setting(f"fit.bounds.{_name}", SettingType.NUMBER_LIST, _bounds, f"Bounds of {_name} when free.")
