"""Shared plumbing of the subcommands: config loading, domain model builders and exit codes."""

import functools
import logging
from collections.abc import Callable
from pathlib import Path
from typing import Any, TypeVar

import click
import numpy as np
from pydantic import BaseModel, ValidationError

from junctionlab import env
from junctionlab.bcs import default_dynes
from junctionlab.exceptions import (
    AnchorOutOfRangeError,
    BudgetExhaustedError,
    ConfigError,
    DegenerateProfileError,
    DimensionMismatchError,
    InsufficientDataError,
    ModelEvaluationError,
    NonNormalizableError,
    OutOfRangeError,
    ParseError,
    PeakNotFoundError,
    QuadratureFailureError,
    SweepPointError,
    TooFewSamplesError,
    UnitError,
)
from junctionlab.export import unflatten
from junctionlab.mar import MarParams
from junctionlab.models import Electrode, Junction, TransmonParams
from junctionlab.prometheus.metrics import COMMANDS, write_metrics
from junctionlab.proximity import BilayerSpec
from junctionlab.settings import RunConfig
from junctionlab.tunneling import CurveMethod, OccupationMode

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

USAGE_ERRORS = (
    ConfigError,
    ParseError,
    UnitError,
    DimensionMismatchError,
    OutOfRangeError,
    AnchorOutOfRangeError,
    TooFewSamplesError,
    OSError,
)
NUMERICAL_ERRORS = (
    QuadratureFailureError,
    NonNormalizableError,
    PeakNotFoundError,
    BudgetExhaustedError,
    SweepPointError,
    ModelEvaluationError,
    DegenerateProfileError,
    InsufficientDataError,
    ArithmeticError,
)

CONFIG_PATH = click.Path(exists=True, dir_okay=False, path_type=Path)
DATA_PATH = click.Path(exists=True, dir_okay=False, path_type=Path)
OUT_PATH = click.Path(dir_okay=False, writable=True, path_type=Path)


def exit_code_for(exc: Exception) -> int:
    """Map an exception onto the exit-code contract."""
    if isinstance(exc, USAGE_ERRORS):
        return EXIT_USAGE
    return EXIT_NUMERICAL


def command_runner(name: str) -> Callable[[Callable[..., None]], Callable[..., None]]:
    """Run a subcommand body under the exit-code contract and record it in the metrics."""

    def decorator(func: Callable[..., None]) -> Callable[..., None]:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> None:  # noqa: ANN401
            code = EXIT_OK
            try:
                func(*args, **kwargs)
            except (*USAGE_ERRORS, *NUMERICAL_ERRORS) as exc:
                code = exit_code_for(exc)
                logger.debug("Command %s failed.", name, exc_info=exc)
                click.secho(f"Error: {exc}", fg="red", err=True)
            except Exception as exc:
                code = EXIT_NUMERICAL
                logger.exception("Unexpected failure in command %s.", name)
                click.secho(f"Error: {exc}", fg="red", err=True)
            COMMANDS.labels(command=name, exit_code=str(code)).inc()
            metrics_file = env.get_metrics_file()
            if metrics_file is not None:
                write_metrics(metrics_file)
            if code != EXIT_OK:
                raise click.exceptions.Exit(code)

        return wrapper

    return decorator


def load_config(path: Path) -> RunConfig:
    config = RunConfig.from_file(path)
    logger.debug("Loaded %d explicit config keys from %s.", len(config.explicit), path)
    return config


def validate_section(cls: type[ModelT], data: dict[str, Any], prefix: str) -> ModelT:
    """Validate config data into a model, reporting the first failure under its dotted key."""
    try:
        return cls.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        key = ".".join([prefix, *(str(part) for part in error["loc"])])
        raise ConfigError(key, error["msg"]) from exc


def _with_default_dynes(config: RunConfig, electrode: Electrode, prefix: str) -> Electrode:
    if config.has(f"{prefix}.dynes"):
        return electrode
    return electrode.model_copy(update={"dynes": default_dynes(electrode.gap0)})


def build_junction(config: RunConfig) -> Junction:
    junction = validate_section(Junction, unflatten(config.section("junction")), "junction")
    return junction.model_copy(
        update={
            "electrode1": _with_default_dynes(config, junction.electrode1, "junction.electrode1"),
            "electrode2": _with_default_dynes(config, junction.electrode2, "junction.electrode2"),
        },
    )


def build_mar(config: RunConfig) -> MarParams:
    data = {key: value for key, value in config.section("mar").items() if key in MarParams.model_fields}
    return validate_section(MarParams, data, "mar")


def build_bilayer(config: RunConfig) -> BilayerSpec:
    return validate_section(BilayerSpec, unflatten(config.section("bilayer")), "bilayer")


def build_transmon(config: RunConfig) -> TransmonParams:
    return validate_section(TransmonParams, config.section("transmon"), "transmon")


def build_bias_grid(config: RunConfig) -> np.ndarray:
    """Get the bias grid from bias.start to bias.stop (inclusive) in steps of bias.step, in μV."""
    start = config.require("bias.start")
    stop = config.require("bias.stop")
    step = config.require("bias.step")
    if step <= 0:
        raise ConfigError("bias.step", f"Must be positive, got {step:g}.")
    if stop <= start:
        raise ConfigError("bias.stop", f"Must exceed bias.start = {start:g}, got {stop:g}; the bias grid is empty.")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def temperature(config: RunConfig, key: str = "temperature_mk") -> float:
    """Get a temperature configured in mK, in K."""
    value = config.require(key)
    if value <= 0:
        raise ConfigError(key, f"Must be positive, got {value:g}.")
    return value * 1e-3


def occupation_mode(config: RunConfig) -> OccupationMode:
    return _enum_value(config, "occupation.mode", OccupationMode)


def curve_method(config: RunConfig) -> CurveMethod:
    return _enum_value(config, "simulation.method", CurveMethod)


def _enum_value(config: RunConfig, key: str, cls: type) -> Any:  # noqa: ANN401
    value = config.require(key)
    try:
        return cls(value)
    except ValueError:
        choices = ", ".join(member.value for member in cls)
        raise ConfigError(key, f"Expected one of {choices}, got '{value}'.") from None


def resolve_relative(config_path: Path, value: str) -> Path:
    """Resolve a path from a config value relative to the config file."""
    path = Path(value)
    return path if path.is_absolute() else config_path.parent / path
