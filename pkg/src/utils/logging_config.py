"""Logging configuration for the ternary Grassmann engine."""

import logging
import sys
from typing import Optional, TextIO


def setup_logging(
    level: int = logging.INFO,
    log_file: Optional[str] = None,
    stream: Optional[TextIO] = None,
) -> logging.Logger:
    """
    Configure structured logging for the application.

    Args:
        level: Logging level (default: INFO)
        log_file: Optional file path for file logging
        stream: Console stream (default: stdout; the CLI passes stderr)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger('ternary_grassmann')
    logger.setLevel(level)

    # Remove existing handlers to avoid duplicates
    logger.handlers.clear()

    console_handler = logging.StreamHandler(stream or sys.stdout)
    console_handler.setLevel(level)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    # Library modules log under src.lib.*; route them through the same handlers.
    lib_logger = logging.getLogger('src')
    lib_logger.setLevel(level)
    lib_logger.handlers = list(logger.handlers)
    lib_logger.propagate = False

    return logger


def log_command(logger: logging.Logger, command: str, status: str, duration: Optional[float] = None):
    """
    Log a CLI command event.

    Args:
        logger: Logger instance
        command: Subcommand name ('eval', 'laws', ...)
        status: 'success' or 'error'
        duration: Optional duration in seconds
    """
    log_data = {
        'event': 'command',
        'command': command,
        'status': status,
    }

    if duration is not None:
        log_data['duration_seconds'] = duration

    logger.info(f"Command: {log_data}")


def log_law_suite(logger: logging.Logger, seed: int, trials: int, failures: int, duration: Optional[float] = None):
    """
    Log a law-suite run.

    Args:
        logger: Logger instance
        seed: Generator seed
        trials: Trials per law
        failures: Number of failing laws
        duration: Optional duration in seconds
    """
    log_data = {
        'event': 'law_suite',
        'seed': seed,
        'trials': trials,
        'failures': failures,
    }

    if duration is not None:
        log_data['duration_seconds'] = duration

    logger.info(f"Law suite: {log_data}")


def log_kernel_evaluation(logger: logging.Logger, density: str, mode: str, cells: int, duration: Optional[float] = None):
    """
    Log a covariance-kernel evaluation.

    Args:
        logger: Logger instance
        density: Density label ('bm', 'fbm:H=0.75', ...)
        mode: 'quadrature' or 'series'
        cells: Number of (t, s) cells evaluated
        duration: Optional duration in seconds
    """
    log_data = {
        'event': 'kernel_evaluation',
        'density': density,
        'mode': mode,
        'cells': cells,
    }

    if duration is not None:
        log_data['duration_seconds'] = duration

    logger.info(f"Kernel evaluation: {log_data}")
