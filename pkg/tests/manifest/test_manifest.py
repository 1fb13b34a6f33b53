"""Tests for run manifests."""

import hashlib
from pathlib import Path

from junctionlab.export import loads_kv
from junctionlab.manifest import build_manifest, file_digest, manifest_path, write_manifest


def test_file_digest(tmp_path: Path):
    """Test that the digest is the SHA-256 of the file content."""
    path = tmp_path / "data.csv"
    path.write_bytes(b"# bias_uV, current_nA\n0,0\n")
    assert file_digest(path) == hashlib.sha256(b"# bias_uV, current_nA\n0,0\n").hexdigest()


def test_manifest_path():
    """Test that the manifest sits next to its output file."""
    assert manifest_path(Path("out/iv.csv")) == Path("out/iv.csv.manifest.kv")


def test_write_manifest(tmp_path: Path):
    """Test that a manifest records the subcommand, config and input digests."""
    # Setup
    config_file = tmp_path / "run.kv"
    config_file.write_text("junction.rn = 7\n", encoding="utf-8")
    manifest = build_manifest("simulate", {"junction.rn": "7.0"}, [config_file])

    # Execute
    path = write_manifest(manifest, tmp_path / "out" / "iv.csv")

    # Verify
    assert path == tmp_path / "out" / "iv.csv.manifest.kv"
    data = loads_kv(path.read_text(encoding="utf-8"))
    assert data["subcommand"] == "simulate"
    assert data["config.junction.rn"] == "7.0"
    assert data["inputs.run.kv"] == file_digest(config_file)
    assert data["timestamp"].endswith("+00:00")
