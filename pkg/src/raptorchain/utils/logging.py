"""Logging configuration for raptorchain runs."""
import logging
import os
import sys
from typing import Optional

LEVEL_ENV = "RAPTORCHAIN_LOG_LEVEL"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def resolve_level(level: Optional[str] = None) -> int:
    """Numeric level from a name or number, falling back to RAPTORCHAIN_LOG_LEVEL."""
    text = (level or os.getenv(LEVEL_ENV) or "INFO").strip()
    if text.isdigit():
        return int(text)
    value = logging.getLevelName(text.upper())
    if not isinstance(value, int):
        raise ValueError(f"Unknown log level: {text}")
    return value


def setup_logging(level: Optional[str] = None) -> int:
    """Send package logs to stderr and return the level in effect."""
    log_level = resolve_level(level)
    logging.basicConfig(
        level=log_level,
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )
    return log_level
