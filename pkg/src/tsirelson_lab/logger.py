"""A small logger factory on top of `logging`, configured from TSL_LOG_* environment variables.

Console output always goes to stderr: stdout carries command results only.
"""

import logging
import os
from logging.handlers import RotatingFileHandler, TimedRotatingFileHandler
from sys import stderr

# Set to keep track of configured loggers
_configured: set[str] = set()

ROOT_LOGGER_NAME = "tsirelson_lab"


def _get_bool_env(name: str, default: bool = False) -> bool:
    """Helper to get boolean from environment variable"""
    return os.getenv(name, str(default)).lower() in ("true", "1", "yes", "on")


def _get_int_env(name: str, default: int) -> int:
    """Helper to get integer from environment variable"""
    try:
        return int(os.getenv(name, str(default)))
    except (ValueError, TypeError):
        return default


def get_logger(name: str = ROOT_LOGGER_NAME,
               log_console_enabled: bool | None = None,
               log_level: str | None = None,
               log_file: str | None = None,
               log_pattern: str | None = None,
               rotation_type: str | None = None,
               max_bytes: int | None = None,
               backup_count: int | None = None,
               ) -> logging.Logger:
    """Get or configure a logger.
    Note, if the logger was already configured, it is returned without reconfiguration.

    Args:
        :param name:                Name of the logger (default: "tsirelson_lab").
        :param log_console_enabled: Whether logging to stderr is enabled (default: TSL_LOG_CONSOLE_ENABLED or True).
        :param log_level:           Logging level (default: TSL_LOG_LEVEL or WARNING).
        :param log_file:            Log file path (default: TSL_LOG_FILE; file logging is off when unset).
        :param log_pattern:         Log pattern (default: TSL_LOG_PATTERN or a standard pattern).
        :param rotation_type:       'size' or 'time' (default: TSL_LOG_ROTATION_TYPE or 'size').
        :param max_bytes:           Max bytes per log file before rotation (default: TSL_LOG_MAX_BYTES or 10MB).
        :param backup_count:        Number of backup files to keep (default: TSL_LOG_BACKUP_COUNT or 5).

    Returns:
        Configured logger instance.
    """

    # Return exists logger if already configured
    if name in _configured:
        return logging.getLogger(name)

    if log_console_enabled is None:
        log_console_enabled = _get_bool_env("TSL_LOG_CONSOLE_ENABLED", True)

    log_level_str = os.getenv("TSL_LOG_LEVEL", "WARNING").upper() if log_level is None else log_level.upper()
    log_level_value = getattr(logging, log_level_str, logging.WARNING)

    log = logging.getLogger(name)
    log.setLevel(log_level_value)
    log.propagate = False

    log_pattern = log_pattern if log_pattern and log_pattern.strip() \
        else os.getenv("TSL_LOG_PATTERN", "%(asctime)s %(levelname)s [%(name)s]: %(message)s")
    formatter = logging.Formatter(log_pattern)

    if not log_file or not log_file.strip():
        log_file = os.getenv("TSL_LOG_FILE")

    if log_file and log_file.strip():
        max_bytes = max_bytes if max_bytes is not None and max_bytes > 0 \
            else _get_int_env("TSL_LOG_MAX_BYTES", 10 * 1024 * 1024)
        backup_count = backup_count if backup_count is not None and backup_count > 0 \
            else _get_int_env("TSL_LOG_BACKUP_COUNT", 5)
        rotation_type = rotation_type if rotation_type is not None \
            else os.getenv("TSL_LOG_ROTATION_TYPE", "size").lower()

        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)

        if rotation_type == "size":
            file_handler = RotatingFileHandler(log_file, maxBytes=max_bytes, backupCount=backup_count)
        else:
            file_handler = TimedRotatingFileHandler(log_file, when="midnight", interval=1, backupCount=backup_count)

        file_handler.setFormatter(formatter)
        log.addHandler(file_handler)
        log.debug(f"File logging enabled. Name: {name}, Level: {log_level_str}, File: {log_file}, "
                  f"Rotation: {rotation_type}-based, backups: {backup_count}.")

    if log_console_enabled:
        console_handler = logging.StreamHandler(stderr)
        console_handler.setFormatter(formatter)
        log.addHandler(console_handler)

    if not log.handlers:
        log.addHandler(logging.NullHandler())

    _configured.add(name)
    return log
