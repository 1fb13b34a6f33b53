"""Main entrypoint of the command line."""

import logging
from logging.handlers import TimedRotatingFileHandler

import click

from junctionlab import env
from junctionlab.cli.fit import fit
from junctionlab.cli.ingest import ingest
from junctionlab.cli.proximity import proximity
from junctionlab.cli.simulate import simulate
from junctionlab.cli.t1 import t1

# Define a console logger
console_handler = logging.StreamHandler()
console_handler.setFormatter(logging.Formatter("%(name)-26s %(levelname)-8s %(message)s"))

# Get logger instance for this module
logger = logging.getLogger(__name__)


def setup_logging(*, verbose: bool = False) -> None:
    """Set up the root logger, which all junctionlab modules will use."""
    log_level = logging.DEBUG if verbose else env.get_logging_level()
    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    if console_handler not in root_logger.handlers:
        root_logger.addHandler(console_handler)

    if env.is_file_logging_enabled() and not any(
        isinstance(handler, TimedRotatingFileHandler) for handler in root_logger.handlers
    ):
        log_file = env.get_logs_dir().joinpath("junctionlab.log")
        file_handler = TimedRotatingFileHandler(log_file, when="midnight", backupCount=5)
        file_handler.setFormatter(logging.Formatter("%(asctime)s:%(levelname)s:%(message)s", "%Y-%m-%d %H:%M:%S"))
        root_logger.addHandler(file_handler)


@click.group()
@click.version_option(version=env.get_version(), prog_name="junctionlab")
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level.")
def cli(*, verbose: bool) -> None:
    """Simulate and fit superconducting tunnel junctions, and predict qubit T1."""
    setup_logging(verbose=verbose)
    logger.debug("junctionlab %s, %d worker(s).", env.get_version(), env.get_threads())


cli.add_command(simulate)
cli.add_command(fit)
cli.add_command(t1)
cli.add_command(proximity)
cli.add_command(ingest)


if __name__ == "__main__":
    cli()
