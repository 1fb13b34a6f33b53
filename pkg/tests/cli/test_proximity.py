"""Tests for the proximity command."""

from collections.abc import Callable
from pathlib import Path

from click.testing import Result

from ..conftest import CONFIGS_DIR
from .conftest import kv_text

Invoke = Callable[..., Result]
WriteFile = Callable[[str, str], Path]


def test_proximity_calibration(invoke: Invoke):
    """Test the effective gap and the coupling of the Al/Ti fixture."""
    result = invoke("proximity", CONFIGS_DIR / "proximity_ti.kv")
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == "Δ_eff = 103.62 μeV at τ = 1"
    assert lines[1] == "T_c   = 0.682 K"
    assert lines[2] == "τ     = 0.9338 for a measured gap of 110 μeV"


def test_proximity_dose_table(invoke: Invoke):
    """Test the per-dose coupling table of the fixture."""
    result = invoke("proximity", CONFIGS_DIR / "proximity_dose.kv")
    assert result.exit_code == 0, result.output
    rows = {line.split()[0]: line.split()[1] for line in result.output.splitlines()[3:]}
    assert rows == {"0.3": "-", "0.6": "0.0509", "1.8": "0.1018", "2.8": "0.1018"}


def test_proximity_decoupled(invoke: Invoke, write_file: WriteFile):
    """Test that a zero coupling reports the bare Al gap."""
    config = write_file("bilayer.kv", kv_text({"bilayer.coupling": "0"}))
    result = invoke("proximity", config)
    assert result.exit_code == 0, result.output
    assert result.output.startswith("Δ_eff = 200.00 μeV at τ = 0\n")


def test_proximity_unreachable_gap(invoke: Invoke, write_file: WriteFile):
    """Test that a measured gap above the Al gap is a usage error."""
    config = write_file("bilayer.kv", kv_text({"proximity.measured_gap": "250"}))
    result = invoke("proximity", config)
    assert result.exit_code == 2
    assert "attainable range" in result.output


def test_proximity_missing_table(invoke: Invoke, write_file: WriteFile):
    """Test that a table that does not exist is a usage error."""
    config = write_file("bilayer.kv", kv_text({"proximity.table": "absent.csv"}))
    assert invoke("proximity", config).exit_code == 2
