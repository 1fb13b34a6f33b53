"""Prometheus metrics collectors."""

import logging
from pathlib import Path

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

registry = CollectorRegistry()

PREFIX = "junctionlab"

SWEEP_POINTS = Counter(
    f"{PREFIX}_sweep_points",
    "Points evaluated by sweeps and restarts",
    ["kind"],
    registry=registry,
)
FIT_EVALUATIONS = Counter(f"{PREFIX}_fit_evaluations", "Forward model evaluations spent in fits", registry=registry)
FIT_SECONDS = Histogram(
    f"{PREFIX}_fit_seconds",
    "Wall time of a complete fit",
    buckets=(0.1, 0.5, 1, 5, 10, 30, 60, 300),
    registry=registry,
)
COMMANDS = Counter(f"{PREFIX}_commands", "CLI commands run", ["command", "exit_code"], registry=registry)

logger = logging.getLogger(__name__)


def write_metrics(path: Path) -> None:
    """Write the registry in the Prometheus text format."""
    logger.debug("Writing metrics to %s", path)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_to_textfile(str(path), registry)
