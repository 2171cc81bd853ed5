from .dataset import Dataset, load_csv, write_csv
from .relevance import load_relevance_csv, validate_relevance
from .generator import (
    PRESET_NAMES,
    SyntheticSpec,
    generate_dataset,
    generate_inliers,
    generate_outliers,
    make_preset,
    preset_spec,
    relevance_for_preset,
)
from .scenario import Scenario, ScenarioSplit, parse_scenario, resolve_training, split_scenario
