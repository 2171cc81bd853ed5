import os
import sys
from dotenv import load_dotenv


# Load .env file from multiple locations
# 1. First try to load from the executable directory
# 2. Then try to load from the current working directory (higher priority)

# Get the path of the current executable or script
if getattr(sys, 'frozen', False):
    # If running as a compiled executable
    exe_dir = os.path.dirname(sys.executable)
else:
    # If running as a normal Python script, go up two levels to the project root
    exe_dir = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir, os.pardir)

# Load .env from executable directory (if exists)
env_path_executable = os.path.join(exe_dir, '.env')
if os.path.exists(env_path_executable):
    load_dotenv(env_path_executable)

# Load .env from current working directory (higher priority - will override existing variables)
env_path_cwd = os.path.join(os.getcwd(), '.env')
if os.path.exists(env_path_cwd):
    load_dotenv(env_path_cwd, override=True)

_TRUE_VALUES = ('true', '1', 'yes', 'on')


def _cast(value, var_type):
    if var_type == bool:
        return str(value).lower() in _TRUE_VALUES
    if var_type == int:
        return int(value)
    if var_type == float:
        return float(value)
    return value


def get_config_value(key: str, default=None, var_type=str):
    """Get env var and cast to the specified type.

    Args:
        key: Environment variable name
        default: Value used when the variable is unset (cast like a raw value)
        var_type: One of str, int, float, bool

    Returns:
        The typed value, or None when unset and no default is given
    """
    value = os.getenv(key)

    if value is None or value.strip() == "":
        if default is None:
            return None
        return _cast(default, var_type)

    try:
        return _cast(value.strip(), var_type)
    except ValueError as e:
        raise ValueError(f"Environment variable {key}={value!r} is not a valid {var_type.__name__}") from e


# ==============================================================================
# Forest Defaults
# ==============================================================================
# Number of isolation trees per forest
default_n_trees = get_config_value("ISOXAI_N_TREES", "100", int)

# Subsample size drawn (without replacement) for every tree
default_subsample = get_config_value("ISOXAI_SUBSAMPLE", "256", int)

# Spread multiplier of the EIF+ intercept distribution
default_eta = get_config_value("ISOXAI_ETA", "1.5", float)

# ==============================================================================
# Performance Settings
# ==============================================================================
# Worker threads for tree fitting, multi-run reports and sweep cells
parallel_num = get_config_value("ISOXAI_PARALLEL_NUM", "1", int)

# ==============================================================================
# Explanation Settings
# ==============================================================================
# Number of refits aggregated into a GFI report
default_gfi_runs = get_config_value("ISOXAI_GFI_RUNS", "40", int)

# Scoremap grid points per axis and padding as a fraction of the feature range
default_scoremap_resolution = get_config_value("ISOXAI_SCOREMAP_RESOLUTION", "50", int)
default_scoremap_padding = get_config_value("ISOXAI_SCOREMAP_PADDING", "0.1", float)

# Accumulate signed hyperplane normals in V instead of their absolute values
signed_normals = get_config_value("ISOXAI_SIGNED_NORMALS", "false", bool)

# ==============================================================================
# Evaluation Settings
# ==============================================================================
# Refit the evaluator forest at every feature-selection step
feature_selection_refit = get_config_value("ISOXAI_FS_REFIT", "true", bool)

# Number of eta values in the EIF+ eta sweep and their range
eta_sweep_points = get_config_value("ISOXAI_ETA_SWEEP_POINTS", "25", int)
eta_sweep_min = get_config_value("ISOXAI_ETA_SWEEP_MIN", "0.5", float)
eta_sweep_max = get_config_value("ISOXAI_ETA_SWEEP_MAX", "5.0", float)

# ==============================================================================
# Dataset Settings
# ==============================================================================
# Default name of the label column in CSV datasets
default_label_column = get_config_value("ISOXAI_LABEL_COLUMN", "label", str)

# ==============================================================================
# Logging Settings
# ==============================================================================
log_level = get_config_value("ISOXAI_LOG_LEVEL", "INFO", str).upper()
log_to_file = get_config_value("ISOXAI_LOG_TO_FILE", "false", bool)
log_dir = get_config_value("ISOXAI_LOG_DIR", "logs", str)
