"""The t1 subcommand: qubit relaxation time over a temperature sweep."""

import csv
import logging
import math
from pathlib import Path

import click

from junctionlab.cli.common import (
    CONFIG_PATH,
    OUT_PATH,
    build_junction,
    build_transmon,
    command_runner,
    load_config,
    occupation_mode,
)
from junctionlab.exceptions import ConfigError
from junctionlab.export import format_value
from junctionlab.fitio import MANIFEST_PREFIX
from junctionlab.manifest import build_manifest, write_manifest
from junctionlab.plot import write_svg
from junctionlab.qubit import gap_asymmetry_protected, reference_transmon, t1_vs_temperature

logger = logging.getLogger(__name__)

T1_COLUMNS = ("T_mK", "T1_us", "gamma", "i_fwd", "i_bwd")


@click.command("t1")
@click.argument("config_path", type=CONFIG_PATH)
@click.option("--out", "out_path", type=OUT_PATH, required=True, help="T1 table CSV to write.")
@click.option("--svg", "svg_path", type=OUT_PATH, default=None, help="Optional SVG plot of T1 against temperature.")
@command_runner("t1")
def t1(config_path: Path, out_path: Path, svg_path: Path | None) -> None:
    """Sweep the quasiparticle-limited T1 of the qubit described in CONFIG_PATH over temperature."""
    config = load_config(config_path)
    junction = build_junction(config)
    qubit = build_transmon(config)
    mode = occupation_mode(config)
    n_neq_total = config.require("quasiparticles.n_neq_total")
    if n_neq_total < 0:
        raise ConfigError("quasiparticles.n_neq_total", f"Must not be negative, got {n_neq_total:g}.")
    temperatures_mk = config.require("sweep.temperatures_mk")
    if len(temperatures_mk) == 0:
        raise ConfigError("sweep.temperatures_mk", "At least one temperature is required.")
    increasing = all(b > a for a, b in zip(temperatures_mk, temperatures_mk[1:], strict=False))
    if not increasing or temperatures_mk[0] <= 0:
        raise ConfigError("sweep.temperatures_mk", "Temperatures must be positive and strictly increasing.")

    if gap_asymmetry_protected(junction, qubit, temperatures_mk[0] * 1e-3):
        logger.info("Gap difference exceeds the qubit photon energy of %.2f μeV.", qubit.photon_energy)
    results = t1_vs_temperature(qubit, junction, n_neq_total, [t * 1e-3 for t in temperatures_mk], mode)

    manifest = write_manifest(build_manifest("t1", config.resolved(), [config_path]), out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with out_path.open("w", encoding="utf-8", newline="") as f:
        f.write(f"# {MANIFEST_PREFIX} {manifest.name}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(T1_COLUMNS)
        for temp, result in results:
            writer.writerow(
                format_value(float(v)) for v in (temp * 1e3, result.t1, result.gamma, result.i_fwd, result.i_bwd)
            )

    if svg_path is not None:
        finite = [(temp * 1e3, result.t1) for temp, result in results if math.isfinite(result.t1)]
        write_svg(
            svg_path,
            [("", [t for t, _ in finite], [v for _, v in finite])],
            "Temperature (mK)",
            "T₁ (μs)",
            log_y=True,
        )
    click.echo(f"Wrote {len(results)} temperatures to {out_path} (manifest {manifest.name}).")
    reference = reference_transmon(qubit.fge)
    if reference is not None:
        click.echo(f"Measured {reference.composition} at {reference.fge:g} GHz: mean T1 {reference.t1_mean:g} μs.")
