"""The fit subcommand: parameter extraction from a measured trace."""

import logging
from pathlib import Path

import click

from junctionlab.cli.common import (
    CONFIG_PATH,
    DATA_PATH,
    OUT_PATH,
    build_mar,
    command_runner,
    load_config,
    validate_section,
)
from junctionlab.exceptions import BudgetExhaustedError, ConfigError
from junctionlab.export import dump_kv
from junctionlab.fitio import MANIFEST_PREFIX, TraceFile, as_iv, load_trace
from junctionlab.fitting import (
    DEFAULT_DELTA1,
    PARAMETER_NAMES,
    FitConfig,
    FitPath,
    FitResult,
    fit_iv,
    peak_estimate,
    report_table,
)
from junctionlab.manifest import build_manifest, write_manifest
from junctionlab.settings import RunConfig

logger = logging.getLogger(__name__)


def build_fit_config(config: RunConfig, default_label: str = "") -> FitConfig:
    """Assemble the fit settings from the fit.* keys of a run config."""
    bounds = {}
    fixed = {}
    for name in PARAMETER_NAMES:
        bound = config.get(f"fit.bounds.{name}")
        if bound:
            if len(bound) != 2:  # noqa: PLR2004
                raise ConfigError(f"fit.bounds.{name}", f"Expected 'low,high', got {len(bound)} values.")
            bounds[name] = tuple(bound)
        value = config.get(f"fit.fixed.{name}")
        if value is not None:
            fixed[name] = value
    data = {
        "free": config.require("fit.free"),
        "bounds": bounds,
        "fixed": fixed,
        "objective": config.require("fit.objective"),
        "max_evals": config.require("fit.max_evals"),
        "seed": config.require("fit.seed"),
        "restarts": config.require("fit.restarts"),
        "mar": build_mar(config),
        "grid_step": config.require("fit.grid_step"),
        "label": config.get("fit.label") or default_label,
    }
    return validate_section(FitConfig, data, "fit")


def fit_path(config: RunConfig) -> FitPath:
    value = config.require("fit.path")
    try:
        return FitPath(value)
    except ValueError:
        raise ConfigError("fit.path", f"Expected full-curve or peak, got '{value}'.") from None


def _write_report(out_path: Path, result: FitResult, manifest_name: str) -> str:
    report = report_table([result])
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(f"# {MANIFEST_PREFIX} {manifest_name}\n{report}\n{dump_kv(result)}", encoding="utf-8")
    return report


@click.command("fit")
@click.argument("data_path", type=DATA_PATH)
@click.argument("config_path", type=CONFIG_PATH)
@click.option("--out", "out_path", type=OUT_PATH, required=True, help="Report file to write.")
@command_runner("fit")
def fit(data_path: Path, config_path: Path, out_path: Path) -> None:
    """Fit the junction model to the IV or dI/dV trace in DATA_PATH with the settings in CONFIG_PATH.

    Conductance traces are integrated into an IV curve first, anchored at I(0) = 0.
    """
    config = load_config(config_path)
    iv = as_iv(load_trace(TraceFile(path=data_path)))
    cfg = build_fit_config(config, default_label=iv.label)
    path = fit_path(config)
    manifest = write_manifest(build_manifest("fit", config.resolved(), [data_path, config_path]), out_path)

    logger.info("Fitting %s over %d samples along the %s path.", cfg.label or data_path.name, len(iv.bias), path.value)
    if path is FitPath.PEAK:
        mar = cfg.mar.model_copy(update={"base_scale": cfg.fixed.get("base_scale", 0.0)})
        result = peak_estimate(iv, delta1=cfg.fixed.get("delta1", DEFAULT_DELTA1), mar=mar, label=cfg.label)
    else:
        try:
            result = fit_iv(iv, cfg)
        except BudgetExhaustedError as exc:
            report = _write_report(out_path, exc.result, manifest.name)
            click.echo(report, nl=False)
            raise

    report = _write_report(out_path, result, manifest.name)
    click.echo(report, nl=False)
    click.echo(f"Manifest: {manifest.name}")
