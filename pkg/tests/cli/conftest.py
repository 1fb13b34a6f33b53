"""Fixtures for the command line tests."""

from collections.abc import Callable, Mapping

import pytest
from click.testing import CliRunner, Result

from junctionlab.main import cli

GRID_AL_TI = {
    "junction.electrode1.gap0": "190",
    "junction.electrode2.gap0": "120",
    "junction.rn": "7.0",
    "bias.start": "-600",
    "bias.stop": "600",
    "bias.step": "2",
    "simulation.method": "grid",
}


def kv_text(settings: Mapping[str, str]) -> str:
    """Render settings as the text of a config file."""
    return "".join(f"{key} = {value}\n" for key, value in settings.items())


@pytest.fixture
def invoke() -> Callable[..., Result]:
    """Run the junctionlab command line with the given arguments."""
    runner = CliRunner()

    def run(*args: object) -> Result:
        return runner.invoke(cli, [str(arg) for arg in args])

    return run
