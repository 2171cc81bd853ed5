import json
import os
from typing import Any, Dict, Iterable, Optional

from isolation_xai.errors import ConfigError, OutputError
from isolation_xai.utils.lock_manager import check_lock_file_exists
from isolation_xai.utils.report_writer import write_json

RESOLVED_CONFIG_FILENAME = "resolved_config.json"

def get_resolved_config_path(run_dir: str) -> str:
    """Get the full path of the resolved_config.json file

    Args:
        run_dir: Run output directory

    Returns:
        Full path to resolved_config.json
    """
    return os.path.join(run_dir, RESOLVED_CONFIG_FILENAME)

def read_config_file(path: Optional[str]) -> Dict[str, Any]:
    """Read a JSON run configuration passed through --config

    Args:
        path: Config file path, or None

    Returns:
        Dictionary of parameters, empty when no path is given

    Raises:
        ConfigError: Missing file, invalid JSON, or not a JSON object
    """
    if not path:
        return {}
    if not os.path.isfile(path):
        raise ConfigError(f"Config file not found: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object")
    return data

def resolve_parameters(command: str, flags: Dict[str, Any], file_config: Dict[str, Any],
                       defaults: Dict[str, Any]) -> Dict[str, Any]:
    """Merge run parameters: command-line flags over config file over defaults

    Args:
        command: Subcommand name, stored in the result
        flags: Parsed flag values; None means the flag was not given
        file_config: Values from the --config file
        defaults: Default value for every known parameter

    Returns:
        The resolved parameter dictionary (only known keys, plus "command")

    Raises:
        ConfigError: The config file belongs to another command or has unknown keys
    """
    file_command = file_config.get("command")
    if file_command is not None and file_command != command:
        raise ConfigError(f"Config file was written by '{file_command}', cannot be used for '{command}'")

    unknown = set(file_config) - set(defaults) - {"command"}
    if unknown:
        raise ConfigError(f"Unknown keys in config file for '{command}': {', '.join(sorted(unknown))}")

    resolved: Dict[str, Any] = {"command": command}
    for key, default in defaults.items():
        if flags.get(key) is not None:
            resolved[key] = flags[key]
        elif key in file_config:
            resolved[key] = file_config[key]
        else:
            resolved[key] = default
    return resolved

def check_outputs_writable(run_dir: str, names: Iterable[str], force: bool) -> None:
    """Refuse to overwrite existing run outputs unless --force is set

    Args:
        run_dir: Run output directory
        names: Output file names the command is about to write
        force: Overwrite permission

    Raises:
        OutputError: The directory is locked, or an output already exists and force is off
    """
    if check_lock_file_exists(run_dir):
        raise OutputError(f"Run directory {run_dir} is locked by another run")
    if force:
        return
    existing = [name for name in names if os.path.exists(os.path.join(run_dir, name))]
    if existing:
        raise OutputError(f"Output already exists in {run_dir}: {', '.join(existing)} (use --force to overwrite)")

def write_resolved_config(run_dir: str, resolved: Dict[str, Any]) -> str:
    """Write resolved_config.json into the run directory

    Returns:
        Path of the written file
    """
    path = get_resolved_config_path(run_dir)
    write_json(resolved, path)
    return path
