import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Union

from evidential.config.config import settings

# Configure logging format
log_format = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")

# Console output goes to stderr so command output on stdout stays clean
console_handler = logging.StreamHandler(sys.stderr)
console_handler.setFormatter(log_format)
console_handler.setLevel(logging.DEBUG)

file_handler = None
if settings.LOG_FILE:
    log_path = Path(settings.LOG_FILE)
    log_path.parent.mkdir(parents=True, exist_ok=True)
    file_handler = RotatingFileHandler(
        log_path, maxBytes=10 * 1024 * 1024, backupCount=5  # 10MB
    )
    file_handler.setFormatter(log_format)
    file_handler.setLevel(logging.INFO)

root_logger = logging.getLogger("evidential")
root_logger.setLevel(settings.LOG_LEVEL.upper())
root_logger.addHandler(console_handler)
if file_handler is not None:
    root_logger.addHandler(file_handler)


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance with the specified name"""
    if not name.startswith("evidential"):
        name = f"evidential.{name}"
    return logging.getLogger(name)


def set_level(level: Union[str, int]) -> int:
    """Change the level of every evidential logger; returns the previous level"""
    previous = root_logger.level
    root_logger.setLevel(level.upper() if isinstance(level, str) else level)
    return previous
