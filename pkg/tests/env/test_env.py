"""Tests for the environment variable getters."""

import logging
from pathlib import Path

import pytest

from junctionlab import env


def test_threads_default():
    """Test that sweeps run on one worker by default."""
    assert env.get_threads() == 1


def test_threads_from_environment(monkeypatch: pytest.MonkeyPatch):
    """Test reading the worker cap."""
    monkeypatch.setenv("JUNCTIONLAB_THREADS", "4")
    assert env.get_threads() == 4


@pytest.mark.parametrize("value", ["0", "many"])
def test_threads_invalid(monkeypatch: pytest.MonkeyPatch, value: str):
    """Test that an invalid worker cap names the variable."""
    monkeypatch.setenv("JUNCTIONLAB_THREADS", value)
    with pytest.raises(ValueError, match="JUNCTIONLAB_THREADS"):
        env.get_threads()


def test_logging_level(monkeypatch: pytest.MonkeyPatch):
    """Test reading the logging level."""
    monkeypatch.setenv("JUNCTIONLAB_LOGGING_LEVEL", "debug")
    assert env.get_logging_level() == logging.DEBUG
    monkeypatch.setenv("JUNCTIONLAB_LOGGING_LEVEL", "LOUD")
    with pytest.raises(ValueError, match="JUNCTIONLAB_LOGGING_LEVEL"):
        env.get_logging_level()


def test_file_logging(monkeypatch: pytest.MonkeyPatch):
    """Test reading the file logging switch."""
    monkeypatch.delenv("JUNCTIONLAB_FILE_LOGGING", raising=False)
    assert not env.is_file_logging_enabled()
    monkeypatch.setenv("JUNCTIONLAB_FILE_LOGGING", "1")
    assert env.is_file_logging_enabled()


def test_directories(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    """Test that the logs directory defaults to the data directory."""
    monkeypatch.setenv("JUNCTIONLAB_DIR_DATA", str(tmp_path / "data"))
    monkeypatch.delenv("JUNCTIONLAB_DIR_LOGS", raising=False)
    assert env.get_logs_dir() == tmp_path / "data"
    assert (tmp_path / "data").is_dir()


def test_metrics_file(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    """Test that the metrics dump is off unless a path is given."""
    assert env.get_metrics_file() is None
    monkeypatch.setenv("JUNCTIONLAB_METRICS_FILE", str(tmp_path / "metrics.prom"))
    assert env.get_metrics_file() == tmp_path / "metrics.prom"
