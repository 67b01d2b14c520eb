import logging
import logging.handlers
import os
import sys

from core.config import get_settings

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
ERROR_LOG = "error.log"
MAX_LOG_BYTES = 10 * 1024 * 1024


def _rotating(path: str, level: int, backups: int) -> logging.Handler:
    handler = logging.handlers.RotatingFileHandler(path, maxBytes=MAX_LOG_BYTES, backupCount=backups, encoding="utf-8")
    handler.setLevel(level)
    return handler


def setup_logging() -> None:
    """Console, rotating run log and error-only log, all on the root logger.

    The console handler writes to stderr; stdout is reserved for command
    results. Calling this again replaces the previous handlers.
    """
    settings = get_settings()
    os.makedirs(settings.LOGS_DIR, exist_ok=True)
    level = logging.getLevelName(settings.LOG_LEVEL)

    root = logging.getLogger()
    root.setLevel(level)
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(level)
    handlers = [
        console,
        _rotating(os.path.join(settings.LOGS_DIR, settings.LOG_FILE), level, backups=5),
        _rotating(os.path.join(settings.LOGS_DIR, ERROR_LOG), logging.ERROR, backups=3),
    ]
    formatter = logging.Formatter(LOG_FORMAT, DATE_FORMAT)
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)

    logging.getLogger(__name__).debug(f"Logging to {settings.LOGS_DIR} at {settings.LOG_LEVEL}")
