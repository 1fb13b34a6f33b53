"""The simulate subcommand: IV curve of a configured junction."""

import logging
from pathlib import Path

import click
import numpy as np

from junctionlab.cli.common import (
    CONFIG_PATH,
    OUT_PATH,
    build_bias_grid,
    build_junction,
    build_mar,
    command_runner,
    curve_method,
    load_config,
    occupation_mode,
    temperature,
)
from junctionlab.exceptions import ConfigError
from junctionlab.fitio import write_curve
from junctionlab.manifest import build_manifest, write_manifest
from junctionlab.mar import MarParams, calibrate_base_scale, mar_current
from junctionlab.models import IVCurve, Junction
from junctionlab.plot import write_svg
from junctionlab.settings import RunConfig
from junctionlab.tunneling import (
    CurveMethod,
    OccupationMode,
    OccupationModel,
    qp_current_curve,
    resolve_curve_method,
    resolve_state,
)

logger = logging.getLogger(__name__)


def _calibrated_mar(
    config: RunConfig,
    junction: Junction,
    mar: MarParams,
    temp: float,
    occ: OccupationModel,
    method: CurveMethod,
    grid_step: float,
) -> MarParams:
    target_rise = config.get("mar.target_rise")
    if target_rise is None:
        return mar
    window = config.require("mar.rise_window")
    if len(window) != 2 or window[0] >= window[1]:  # noqa: PLR2004
        raise ConfigError("mar.rise_window", f"Expected two increasing biases, got {window}.")
    qp = qp_current_curve(junction, window, temp, occ, method=method, grid_step=grid_step)
    base_scale = calibrate_base_scale(
        junction,
        mar,
        window[0],
        window[1],
        target_rise,
        qp_rise=float(qp[1] - qp[0]),
        temperature=temp,
    )
    logger.info("MAR base scale calibrated to %.4g nA.", base_scale)
    return mar.model_copy(update={"base_scale": base_scale})


def simulate_curve(config: RunConfig) -> IVCurve:
    """Simulate the IV curve a run config describes, noise included."""
    junction = build_junction(config)
    mar = build_mar(config)
    bias = build_bias_grid(config)
    temp = temperature(config)
    mode = occupation_mode(config)
    method = resolve_curve_method(curve_method(config), mode)
    grid_step = config.require("simulation.grid_step")
    if method is CurveMethod.GRID and mode is not OccupationMode.THERMAL:
        raise ConfigError("simulation.method", "The grid method supports thermal occupation only.")

    state = resolve_state(junction, temp, config.require("quasiparticles.n_neq_total"))
    occ = OccupationModel.from_state(state, mode)
    mar = _calibrated_mar(config, junction, mar, temp, occ, method, grid_step)

    logger.info("Simulating %d bias points at %g mK with the %s method.", bias.size, temp * 1e3, method.value)
    current = qp_current_curve(junction, bias, temp, occ, method=method, grid_step=grid_step)
    current = current + mar_current(junction, bias, mar, temperature=temp)

    noise = config.require("simulation.noise")
    if noise < 0:
        raise ConfigError("simulation.noise", f"Must not be negative, got {noise:g}.")
    if noise > 0:
        rng = np.random.default_rng(config.require("simulation.seed"))
        current = current + noise * np.abs(current) * rng.standard_normal(current.size)
    return IVCurve.from_arrays(bias, current, label=config.get("simulation.label") or "")


@click.command("simulate")
@click.argument("config_path", type=CONFIG_PATH)
@click.option("--out", "out_path", type=OUT_PATH, required=True, help="IV curve CSV to write.")
@click.option("--svg", "svg_path", type=OUT_PATH, default=None, help="Optional SVG plot of the curve.")
@command_runner("simulate")
def simulate(config_path: Path, out_path: Path, svg_path: Path | None) -> None:
    """Simulate the IV curve of the junction described in CONFIG_PATH."""
    config = load_config(config_path)
    curve = simulate_curve(config)
    manifest = write_manifest(build_manifest("simulate", config.resolved(), [config_path]), out_path)
    write_curve(out_path, curve, manifest_name=manifest.name)
    if svg_path is not None:
        write_svg(
            svg_path,
            [(curve.label, curve.bias, curve.current)],
            "Bias (μV)",
            "Current (nA)",
            title=curve.label,
        )
    click.echo(f"Wrote {len(curve.bias)} points to {out_path} (manifest {manifest.name}).")
