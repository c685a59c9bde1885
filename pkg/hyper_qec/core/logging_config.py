"""Centralized logging configuration for hyper-qec.

Console output stays human-readable for interactive CLI use; a rotating
JSON log file keeps the structured ``extra`` context (seeds, cycle indices,
fidelities) for later analysis of long optimization runs.
"""

from __future__ import annotations

import logging
import logging.config
from pathlib import Path
from typing import Any

PACKAGE_LOGGER = "hyper_qec"
LOG_FILE_NAME = "hyperqec.log"
LOG_FILE_MAX_BYTES = 10 * 1024 * 1024
LOG_FILE_BACKUPS = 5

_FORMATTERS: dict[str, dict[str, str]] = {
    "json": {
        "()": "pythonjsonlogger.json.JsonFormatter",
        "format": "%(asctime)s %(name)s %(levelname)s %(message)s",
        "datefmt": "%Y-%m-%dT%H:%M:%S%z",
    },
    "console": {
        "format": "%(asctime)s %(levelname)-7s %(name)s | %(message)s",
        "datefmt": "%H:%M:%S",
    },
}


def build_logging_config(
    json_output: bool = False,
    log_level: str = "INFO",
    log_dir: str | Path = "logs",
) -> dict[str, Any]:
    """dictConfig mapping: console on stderr at ``log_level``, JSON file at DEBUG."""
    level = (log_level or "INFO").upper()
    handlers: dict[str, dict[str, Any]] = {
        "console": {
            "class": "logging.StreamHandler",
            "level": level,
            "formatter": "json" if json_output else "console",
            "stream": "ext://sys.stderr",
        },
        "json_file": {
            "class": "logging.handlers.RotatingFileHandler",
            "level": "DEBUG",
            "formatter": "json",
            "filename": str(Path(log_dir) / LOG_FILE_NAME),
            "maxBytes": LOG_FILE_MAX_BYTES,
            "backupCount": LOG_FILE_BACKUPS,
        },
    }
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {name: dict(spec) for name, spec in _FORMATTERS.items()},
        "handlers": handlers,
        "loggers": {
            PACKAGE_LOGGER: {
                "level": level,
                "handlers": list(handlers),
                "propagate": False,
            },
        },
        "root": {"level": "WARNING", "handlers": ["console"]},
    }


def setup_logging(
    json_output: bool = False,
    log_level: str = "INFO",
    log_dir: str | Path | None = None,
) -> None:
    """Configure logging for the CLI.

    Args:
        json_output: Use the JSON formatter on the console too
        log_level: Console and package level (DEBUG, INFO, WARNING, ERROR)
        log_dir: Directory for the rotating JSON log; defaults to the
            ``HQEC_LOG_DIR`` setting
    """
    if log_dir is None:
        from .config import get_settings

        log_dir = get_settings().log_dir

    Path(log_dir).mkdir(parents=True, exist_ok=True)
    logging.config.dictConfig(
        build_logging_config(json_output=json_output, log_level=log_level, log_dir=log_dir)
    )


def get_logger(name: str) -> logging.Logger:
    """Module logger; pass structured context through ``extra``.

    Example:
        logger = get_logger(__name__)
        logger.info("Cycle finished", extra={"cycle": 3, "fidelity": 0.9999999})
    """
    return logging.getLogger(name)
