"""
Logging setup shared by the CLI and sweep workers.
"""

import logging
from typing import Optional

from pythonjsonlogger import jsonlogger

from ..config import LogFormat, LogLevel, settings

TEXT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
JSON_FIELDS = "%(asctime)s %(name)s %(levelname)s %(message)s"


def configure_logging(level: Optional[LogLevel] = None, fmt: Optional[LogFormat] = None) -> None:
    """Configure the root logger; safe to call again in worker processes."""
    level = level or settings.log_level
    fmt = fmt or settings.log_format

    handler = logging.StreamHandler()
    if fmt == LogFormat.JSON:
        handler.setFormatter(jsonlogger.JsonFormatter(JSON_FIELDS))
    else:
        handler.setFormatter(logging.Formatter(TEXT_FORMAT))

    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(getattr(logging, level.value))

    # matplotlib is chatty at DEBUG
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
