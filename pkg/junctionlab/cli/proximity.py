"""The proximity subcommand: effective gap of a bilayer counter-electrode."""

import logging
from pathlib import Path

import click

from junctionlab.cli.common import CONFIG_PATH, build_bilayer, command_runner, load_config, resolve_relative
from junctionlab.proximity import bilayer_tc, calibrate_coupling, cooper_limit_gap, coupling_by_dose, load_junction_table

logger = logging.getLogger(__name__)


@click.command("proximity")
@click.argument("config_path", type=CONFIG_PATH)
@command_runner("proximity")
def proximity(config_path: Path) -> None:
    """Print the effective gap of the bilayer described in CONFIG_PATH.

    With proximity.measured_gap set, also calibrate the interface coupling against it. With
    proximity.table naming a junction table, print the coupling per disorder dose.
    """
    config = load_config(config_path)
    spec = build_bilayer(config)
    click.echo(f"Δ_eff = {cooper_limit_gap(spec):.2f} μeV at τ = {spec.coupling:.4g}")
    click.echo(f"T_c   = {bilayer_tc(spec):.3f} K")

    measured_gap = config.get("proximity.measured_gap")
    if measured_gap is not None:
        coupling = calibrate_coupling(spec, measured_gap)
        click.echo(f"τ     = {coupling:.4f} for a measured gap of {measured_gap:g} μeV")

    table = config.get("proximity.table")
    if table:
        path = resolve_relative(config_path, table)
        rows = load_junction_table(path)
        logger.info("Loaded %d junctions from %s.", len(rows), path)
        click.echo(f"{'O₂ dose (mbar·min)':>20} {'τ':>8}")
        for dose, coupling in coupling_by_dose(spec, rows).items():
            value = "-" if coupling is None else f"{coupling:.4f}"
            click.echo(f"{dose:>20g} {value:>8}")
