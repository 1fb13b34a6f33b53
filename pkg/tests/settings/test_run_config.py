"""Tests for the run configuration registry."""

from collections.abc import Callable
from pathlib import Path

import pytest

from junctionlab.exceptions import ConfigError
from junctionlab.settings import SETTINGS, RunConfig, SettingType, parse_setting


def test_defaults_resolve():
    """Test that unset keys fall back to their defaults."""
    config = RunConfig({})
    assert config.get("mar.n_max") == 3
    assert config.get("junction.rn") == 18.6
    assert config.get("sweep.temperatures_mk")[0] == 20.0
    assert config.get("proximity.measured_gap") is None


def test_explicit_value_wins():
    """Test that an explicit value overrides the default."""
    config = RunConfig({"junction.rn": "5"})
    assert config.get("junction.rn") == 5.0
    assert config.has("junction.rn")
    assert not config.has("bias.step")


def test_unknown_key_is_rejected():
    """Test that a typo in a key is reported with the key."""
    with pytest.raises(ConfigError) as exc_info:
        RunConfig({"junction.rm": "5"})
    assert exc_info.value.key == "junction.rm"


def test_badly_typed_value():
    """Test that a value of the wrong type is reported with the key."""
    config = RunConfig({"bias.step": "two"})
    with pytest.raises(ConfigError, match=r"bias\.step"):
        config.get("bias.step")


def test_require_without_default():
    """Test that require fails for a key without value or default."""
    with pytest.raises(ConfigError, match="required"):
        RunConfig({}).require("proximity.measured_gap")


def test_section_strips_prefix():
    """Test resolving all keys below a prefix."""
    section = RunConfig({"junction.electrode2.gap0": "120"}).section("junction")
    assert section["electrode2.gap0"] == "120"
    assert section["electrode1.gap0"] == "190"
    assert section["rn"] == "18.6"
    assert "electrode1.dynes" not in section


def test_resolved_limited_to_prefix():
    """Test dumping the effective values of a subset of keys."""
    resolved = RunConfig({"bias.step": "0.5"}).resolved(("bias",))
    assert resolved == {"bias.start": "-800", "bias.step": "0.5", "bias.stop": "800"}


def test_every_setting_default_parses():
    """Test that every registered default parses as its own type."""
    for key, definition in SETTINGS.items():
        if definition.default is not None:
            parse_setting(key).parse(definition.default)


def test_list_types():
    """Test parsing of list values."""
    assert SETTINGS["fit.free"].type == SettingType.STRING_LIST
    assert RunConfig({"fit.free": "delta2, rn"}).get("fit.free") == ["delta2", "rn"]
    assert RunConfig({"fit.bounds.rn": "1,100"}).get("fit.bounds.rn") == [1.0, 100.0]


def test_from_file(write_file: Callable[[str, str], Path]):
    """Test loading a config file."""
    path = write_file("run.kv", "# Junction\njunction.rn = 7\n")
    assert RunConfig.from_file(path).get("junction.rn") == 7.0


def test_from_file_parse_error(write_file: Callable[[str, str], Path]):
    """Test that a malformed config file is reported as a config error."""
    path = write_file("run.kv", "junction.rn 7\n")
    with pytest.raises(ConfigError, match="line 1"):
        RunConfig.from_file(path)
