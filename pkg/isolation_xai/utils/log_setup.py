import os
import logging
from logging.handlers import RotatingFileHandler
from typing import Optional

from ..config.settings import log_dir, log_level, log_to_file

LOG_FILE_NAME = 'isoxai.log'


# Define custom formatter
class CustomFormatter(logging.Formatter):
    def format(self, record):
        if record.getMessage().strip() in ('', '\n'):
            return ''
        return super().format(record)


def configure_logging(level: Optional[str] = None, to_file: Optional[bool] = None) -> None:
    """
    Configure the root logger for CLI runs.

    Args:
        level: Log level name (defaults to ISOXAI_LOG_LEVEL)
        to_file: Also write a rotating log file under ISOXAI_LOG_DIR
    """
    level_name = (level or log_level).upper()
    numeric_level = getattr(logging, level_name, None)
    if not isinstance(numeric_level, int):
        numeric_level = logging.INFO

    logging.basicConfig(level=numeric_level, format='%(asctime)s - %(levelname)s - %(message)s')
    root = logging.getLogger()
    root.setLevel(numeric_level)

    if not (log_to_file if to_file is None else to_file):
        return

    # Create log directory
    os.makedirs(log_dir, exist_ok=True)
    log_path = os.path.abspath(os.path.join(log_dir, LOG_FILE_NAME))
    for existing in root.handlers:
        if isinstance(existing, RotatingFileHandler) and existing.baseFilename == log_path:
            return

    # 1 MiB per file, 5 backups
    handler = RotatingFileHandler(log_path, maxBytes=1048576, backupCount=5, encoding='utf-8')
    handler.setFormatter(CustomFormatter('%(asctime)s [%(levelname)s] %(name)s: %(message)s'))
    root.addHandler(handler)
