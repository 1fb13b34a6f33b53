"""Utilities for grabbing config from environment variables."""

import logging
import os
from importlib import metadata
from pathlib import Path

from platformdirs import user_data_dir

logger = logging.getLogger(__name__)


def get_threads() -> int:
    """Get the maximum number of parallel workers used by sweeps and fit restarts.

    Returns 1 if no environment variable was set.

    Returns:
        int: The worker cap.

    """
    threads = os.getenv("JUNCTIONLAB_THREADS")
    if threads is None:
        return 1
    try:
        value = int(threads)
    except ValueError as exc:
        raise ValueError(f"Failed to parse JUNCTIONLAB_THREADS variable: {exc!s}") from exc
    if value < 1:
        raise ValueError(f"Failed to parse JUNCTIONLAB_THREADS variable: must be at least 1, got {value}.")
    return value


LOGGING_LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}


def get_logging_level() -> int:
    """Get the console and file logging level, INFO unless JUNCTIONLAB_LOGGING_LEVEL says otherwise."""
    name = os.getenv("JUNCTIONLAB_LOGGING_LEVEL", "INFO").upper()
    if name not in LOGGING_LEVELS:
        raise ValueError(f"Failed to parse JUNCTIONLAB_LOGGING_LEVEL variable: Unknown logging level '{name}'.")
    return LOGGING_LEVELS[name]


def is_file_logging_enabled() -> bool:
    """Get whether log output should also go to a rotating file in the logs directory.

    Returns False if no environment variable was set.

    Returns:
        bool: Whether file logging is enabled.

    """
    file_logging = os.getenv("JUNCTIONLAB_FILE_LOGGING", "FALSE").upper()
    if file_logging in {"FALSE", "0"}:
        return False
    if file_logging in {"TRUE", "1"}:
        return True
    raise ValueError(f"Failed to parse JUNCTIONLAB_FILE_LOGGING variable: Unknown value '{file_logging}'.")


def _ensure_dir(path: str | Path) -> Path:
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def get_data_dir() -> Path:
    """Get the data directory, created on first use.

    Defaults to the per-user platform data directory of junctionlab.
    """
    return _ensure_dir(os.getenv("JUNCTIONLAB_DIR_DATA") or user_data_dir("junctionlab"))


def get_logs_dir() -> Path:
    """Get the directory rotating log files go to, the data directory unless overridden."""
    env_logs_dir = os.getenv("JUNCTIONLAB_DIR_LOGS")
    return _ensure_dir(env_logs_dir) if env_logs_dir else get_data_dir()


def get_metrics_file() -> Path | None:
    """Get the path the Prometheus text-format metrics are written to after a command.

    Returns None if no environment variable was set, which disables the dump.

    Returns:
        Optional[Path]: The metrics file path.

    """
    metrics_file = os.getenv("JUNCTIONLAB_METRICS_FILE")
    if metrics_file is None or len(metrics_file) == 0:
        return None
    return Path(metrics_file)


def get_version() -> str:
    """Get the version of the installed package.

    Returns:
        str: The version.

    """
    try:
        return metadata.version("junctionlab")
    except metadata.PackageNotFoundError:
        logger.debug("Package metadata not found, running from a source checkout.")
        return "unknown"
