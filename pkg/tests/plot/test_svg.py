"""Tests for the SVG plots."""

from pathlib import Path

from junctionlab.plot import write_svg


def test_write_svg(tmp_path: Path):
    """Test that an overlay is written as SVG into a new directory."""
    path = tmp_path / "plots" / "iv.svg"
    curves = [("Al/Al", [-1, 0, 1], [-2, 0, 2]), ("Al/Ti", [-1, 0, 1], [-1, 0, 1])]
    write_svg(path, curves, "Bias (μV)", "Current (nA)")
    text = path.read_text(encoding="utf-8")
    assert text.startswith("<?xml")
    assert "<svg" in text


def test_svg_is_reproducible(tmp_path: Path):
    """Test that plotting the same curves twice gives identical files."""
    # Setup
    curves = [("", [20.0, 60.0, 100.0, 200.0], [40.0, 60.0, 55.0, 3.0])]

    # Execute
    write_svg(tmp_path / "a.svg", curves, "Temperature (mK)", "T₁ (μs)", title="T1", log_y=True)
    write_svg(tmp_path / "b.svg", curves, "Temperature (mK)", "T₁ (μs)", title="T1", log_y=True)

    # Verify
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
