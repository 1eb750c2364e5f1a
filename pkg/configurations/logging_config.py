import logging
import sys

from pythonjsonlogger.json import JsonFormatter

ROOT_LOGGER = "divisi"


def configure_logging(level: str = "WARNING", json_output: bool = True) -> logging.Logger:
    """
    Install a single stderr handler on the package root logger.

    Calling it again replaces the previous handler, so repeated CLI
    invocations in one process never write to a stale stream.
    Stdout is reserved for reports.
    """
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(level.upper())

    for old in list(logger.handlers):
        logger.removeHandler(old)

    handler = logging.StreamHandler(sys.stderr)
    if json_output:
        handler.setFormatter(
            JsonFormatter(
                "%(asctime)s %(levelname)s %(name)s %(message)s",
                rename_fields={"levelname": "level", "asctime": "time"},
            )
        )
    else:
        handler.setFormatter(logging.Formatter("%(asctime)s - %(levelname)s - %(name)s - %(message)s"))
    logger.addHandler(handler)
    logger.propagate = False
    return logger
