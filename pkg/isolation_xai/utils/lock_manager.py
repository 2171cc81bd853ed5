import os
import logging
from contextlib import contextmanager
from typing import Iterator

from ..errors import OutputError

logger = logging.getLogger(__name__)

LOCK_FILE_NAME = 'run.lock'

def create_lock_file(run_dir: str) -> bool:
    """
    Create a lock file in a run output directory.

    Args:
        run_dir (str): Path to the run directory (created if missing).

    Returns:
        bool: True if the lock file was created, False if another run holds it.
    """
    lock_file_path = os.path.join(run_dir, LOCK_FILE_NAME)
    os.makedirs(run_dir, exist_ok=True)

    try:
        # O_EXCL makes creation fail when the lock already exists
        fd = os.open(lock_file_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        logger.warning(f"Lock file already exists: {lock_file_path}")
        return False

    with os.fdopen(fd, 'w') as f:
        # Write process ID to lock file for debugging
        f.write(f"Process ID: {os.getpid()}\n")

    logger.debug(f"Lock file created: {lock_file_path}")
    return True

def remove_lock_file(run_dir: str) -> bool:
    """
    Remove the lock file from a run directory.

    Args:
        run_dir (str): Path to the run directory.

    Returns:
        bool: True if the lock file was removed, False if it was not there.
    """
    lock_file_path = os.path.join(run_dir, LOCK_FILE_NAME)

    if not os.path.exists(lock_file_path):
        logger.warning(f"Lock file not found: {lock_file_path}")
        return False

    os.remove(lock_file_path)
    logger.debug(f"Lock file removed: {lock_file_path}")
    return True

def check_lock_file_exists(run_dir: str) -> bool:
    """
    Check if a run directory is locked.

    Args:
        run_dir (str): Path to the run directory.

    Returns:
        bool: True if the lock file exists.
    """
    return os.path.exists(os.path.join(run_dir, LOCK_FILE_NAME))

@contextmanager
def run_directory_lock(run_dir: str) -> Iterator[None]:
    """
    Hold the run directory lock while outputs are written.

    Raises:
        OutputError: Another run holds the lock.
    """
    if not create_lock_file(run_dir):
        raise OutputError(f"Run directory {run_dir} is locked by another run ({LOCK_FILE_NAME} present)")
    try:
        yield
    finally:
        remove_lock_file(run_dir)
