"""Tests for the t1 command."""

from collections.abc import Callable
from pathlib import Path

import pytest
from click.testing import Result

from ..conftest import CONFIGS_DIR
from .conftest import kv_text

Invoke = Callable[..., Result]
WriteFile = Callable[[str, str], Path]

NEAR_SYMMETRIC = {
    "junction.electrode1.gap0": "190",
    "junction.electrode2.gap0": "180",
    "junction.electrode1.dynes": "0.02",
    "junction.electrode2.dynes": "0.02",
    "occupation.mode": "nonequilibrium",
    "quasiparticles.n_neq_total": "1",
    "sweep.temperatures_mk": "20",
}


def test_t1_single_temperature(invoke: Invoke, write_file: WriteFile, tmp_path: Path):
    """Test that a one-point sweep writes one row after the header."""
    # Setup
    config = write_file("t1.kv", kv_text(NEAR_SYMMETRIC))
    out = tmp_path / "t1.csv"

    # Execute
    result = invoke("t1", config, "--out", out, "--svg", tmp_path / "t1.svg")

    # Verify
    assert result.exit_code == 0, result.output
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# manifest: t1.csv.manifest.kv"
    assert lines[1] == "T_mK,T1_us,gamma,i_fwd,i_bwd"
    assert len(lines) == 3
    values = [float(v) for v in lines[2].split(",")]
    assert values[0] == 20
    assert values[1] == pytest.approx(1e6 / values[2])
    assert (tmp_path / "t1.svg").exists()


def test_t1_overfilled_density(invoke: Invoke, write_file: WriteFile, tmp_path: Path):
    """Test that an impossible density fails with the temperature it failed at."""
    config = write_file("t1.kv", kv_text({**NEAR_SYMMETRIC, "quasiparticles.n_neq_total": "1e9"}))
    result = invoke("t1", config, "--out", tmp_path / "t1.csv")
    assert result.exit_code == 1
    assert "20 mK" in result.output
    assert not (tmp_path / "t1.csv").exists()


@pytest.mark.parametrize(
    ("update", "message"),
    [
        ({"sweep.temperatures_mk": "20,20"}, "sweep.temperatures_mk"),
        ({"sweep.temperatures_mk": "0,20"}, "sweep.temperatures_mk"),
        ({"sweep.temperatures_mk": ""}, "sweep.temperatures_mk"),
        ({"quasiparticles.n_neq_total": "-1"}, "quasiparticles.n_neq_total"),
        ({"transmon.fge": "0"}, "transmon.fge"),
    ],
)
def test_t1_rejects_config(
    invoke: Invoke,
    write_file: WriteFile,
    tmp_path: Path,
    update: dict[str, str],
    message: str,
):
    """Test that invalid sweep settings are usage errors."""
    config = write_file("t1.kv", kv_text({**NEAR_SYMMETRIC, **update}))
    result = invoke("t1", config, "--out", tmp_path / "t1.csv")
    assert result.exit_code == 2
    assert message in result.output


def _t1_column(path: Path) -> list[float]:
    lines = path.read_text(encoding="utf-8").splitlines()[2:]
    return [float(line.split(",")[1]) for line in lines]


def test_t1_fixture_configs(invoke: Invoke, tmp_path: Path):
    """Test the temperature dependence of the near-symmetric and asymmetric fixture devices."""
    # Execute
    near = invoke("t1", CONFIGS_DIR / "t1_near_symmetric.kv", "--out", tmp_path / "near.csv")
    far = invoke("t1", CONFIGS_DIR / "t1_asymmetric.kv", "--out", tmp_path / "far.csv")

    # Verify
    assert near.exit_code == 0, near.output
    assert far.exit_code == 0, far.output
    assert "Measured Al/AlOx/Al/Ti at 5.1 GHz: mean T1 1 μs." in near.output
    near_t1 = _t1_column(tmp_path / "near.csv")
    far_t1 = _t1_column(tmp_path / "far.csv")
    assert len(near_t1) == len(far_t1) == 10
    best = near_t1.index(max(near_t1))
    assert 0 < best < len(near_t1) - 1
    assert near_t1[-1] < near_t1[0]
    assert far_t1[0] > near_t1[0]
