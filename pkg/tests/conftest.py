"""Shared fixtures for the junctionlab test suite."""

from collections.abc import Callable
from pathlib import Path

import pytest

from junctionlab.models import Electrode, Junction

FIXTURES_DIR = Path(__file__).parent.parent / "fixtures"
CONFIGS_DIR = FIXTURES_DIR / "configs"


@pytest.fixture(autouse=True)
def _single_worker(monkeypatch: pytest.MonkeyPatch):
    """Run every sweep in-process unless a test asks otherwise."""
    monkeypatch.delenv("JUNCTIONLAB_THREADS", raising=False)
    monkeypatch.delenv("JUNCTIONLAB_METRICS_FILE", raising=False)


@pytest.fixture
def al_junction() -> Junction:
    """Symmetric Al/AlOx/Al junction."""
    return Junction(
        electrode1=Electrode(gap0=190, dynes=0.19),
        electrode2=Electrode(gap0=190, dynes=0.19),
        rn=18.6,
    )


@pytest.fixture
def al_ti_junction() -> Junction:
    """Al/AlOx/Al/Ti junction with a lowered counter-electrode gap."""
    return Junction(
        electrode1=Electrode(gap0=190, dynes=0.19),
        electrode2=Electrode(gap0=120, dynes=0.12),
        rn=7.0,
        transparency=0.05,
    )


@pytest.fixture
def write_file(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write a text file into the test's temporary directory."""

    def write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
