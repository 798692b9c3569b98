"""The `csifb` logger.

DEBUG and up goes to CSIFB_LOG_DIR/csifb.log (10MB per file, 7 backups)
unless CSIFB_LOG_FILE is off; the console handler writes to stderr at
CSIFB_LOG_LEVEL so CSV reports on stdout stay clean.
"""

import logging
import logging.handlers
from pathlib import Path

from csifb.config import settings

logger = logging.getLogger("csifb")
logger.setLevel(logging.DEBUG)

# module may be re-imported by test runners
logger.handlers.clear()
logger.propagate = False

formatter = logging.Formatter(
    "[%(asctime)s] %(levelname)-8s %(name)s: %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)

log_file = None
if settings.LOG_FILE:
    try:
        logs_dir = Path(settings.LOG_DIR)
        logs_dir.mkdir(parents=True, exist_ok=True)
        log_file = logs_dir / "csifb.log"
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=10 * 1024 * 1024,  # 10 MB per file
            backupCount=7,
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    except OSError:
        # read-only checkout: console logging only
        log_file = None

console_handler = logging.StreamHandler()
console_handler.setLevel(
    getattr(logging, settings.LOG_LEVEL, logging.INFO)
)
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)

logger.debug(f"Logging initialized, log file: {log_file}")
