"""The ingest subcommand: normalise a measured trace and convert between IV and dI/dV."""

import logging
from pathlib import Path

import click

from junctionlab.cli.common import DATA_PATH, OUT_PATH, command_runner
from junctionlab.fitio import TraceFile, differentiate_iv, integrate_conductance, load_trace, write_curve
from junctionlab.manifest import build_manifest, write_manifest
from junctionlab.models import ConductanceCurve, IVCurve

logger = logging.getLogger(__name__)


@click.command("ingest")
@click.argument("data_path", type=DATA_PATH)
@click.option(
    "--to",
    "target",
    type=click.Choice(["iv", "conductance"]),
    required=True,
    help="Representation to write.",
)
@click.option("--out", "out_path", type=OUT_PATH, required=True, help="Trace file to write.")
@click.option("--anchor-bias", type=float, default=0.0, show_default=True, help="Integration anchor V₀ in μV.")
@click.option("--anchor-current", type=float, default=0.0, show_default=True, help="Current I₀ in nA at V₀.")
@click.option(
    "--gain",
    type=click.FloatRange(min=0, min_open=True),
    default=1.0,
    show_default=True,
    help="Factor applied to the raw signal.",
)
@command_runner("ingest")
def ingest(
    data_path: Path,
    target: str,
    out_path: Path,
    anchor_bias: float,
    anchor_current: float,
    gain: float,
) -> None:
    """Read the trace in DATA_PATH and write it in internal units as an IV or conductance trace."""
    trace = TraceFile(path=data_path, gain=gain)
    curve = load_trace(trace)
    converted: IVCurve | ConductanceCurve
    if target == "iv":
        converted = curve if isinstance(curve, IVCurve) else integrate_conductance(curve, (anchor_bias, anchor_current))
    else:
        converted = curve if isinstance(curve, ConductanceCurve) else differentiate_iv(curve)
    logger.info("Converted %d samples of %s to %s.", len(converted.bias), data_path.name, target)

    options = {
        "to": target,
        "anchor_bias": repr(anchor_bias),
        "anchor_current": repr(anchor_current),
        "gain": repr(gain),
    }
    manifest = write_manifest(build_manifest("ingest", options, [data_path]), out_path)
    write_curve(out_path, converted, manifest_name=manifest.name)
    click.echo(f"Wrote {len(converted.bias)} points to {out_path} (manifest {manifest.name}).")
