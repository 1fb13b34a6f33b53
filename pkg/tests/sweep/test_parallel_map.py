"""Tests for the ordered parallel map."""

import math

import pytest

from junctionlab.prometheus.metrics import registry
from junctionlab.sweep import parallel_map


def _points(kind: str) -> float:
    return registry.get_sample_value("junctionlab_sweep_points_total", {"kind": kind}) or 0.0


@pytest.mark.parametrize("threads", ["1", "2"])
def test_results_keep_input_order(monkeypatch: pytest.MonkeyPatch, threads: str):
    """Test that results come back in input order for any worker count."""
    monkeypatch.setenv("JUNCTIONLAB_THREADS", threads)
    values = [9.0, 1.0, 16.0, 4.0, 25.0]
    assert parallel_map(math.sqrt, values) == [3.0, 1.0, 4.0, 2.0, 5.0]


def test_empty_input():
    """Test that an empty input gives an empty result."""
    assert parallel_map(math.sqrt, []) == []


def test_points_are_counted():
    """Test that every mapped item is counted under its kind."""
    before = _points("test")
    parallel_map(abs, [-1, 2, -3], kind="test")
    assert _points("test") == before + 3


def test_invalid_worker_count(monkeypatch: pytest.MonkeyPatch):
    """Test that an unparsable worker count is reported."""
    monkeypatch.setenv("JUNCTIONLAB_THREADS", "many")
    with pytest.raises(ValueError, match="JUNCTIONLAB_THREADS"):
        parallel_map(math.sqrt, [1.0])
