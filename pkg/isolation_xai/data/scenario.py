import math
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ConfigError, DatasetError
from ..utils.seeding import make_rng
from .dataset import Dataset

logger = logging.getLogger(__name__)

SCENARIO_I = "I"
SCENARIO_II = "II"
CONTAMINATED = "contaminated"


@dataclass(frozen=True)
class Scenario:
    """Training protocol: full data (I), inliers only (II) or a set outlier fraction."""
    kind: str
    fraction: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in (SCENARIO_I, SCENARIO_II, CONTAMINATED):
            raise ConfigError(f"Unknown scenario kind '{self.kind}'")
        if self.kind == CONTAMINATED:
            if self.fraction is None or not (0.0 <= self.fraction < 1.0):
                raise ConfigError(f"Contamination fraction must be in [0, 1), got {self.fraction}")

    @property
    def tag(self) -> str:
        if self.kind == CONTAMINATED:
            return f"contaminated({self.fraction:g})"
        return self.kind

    def __str__(self) -> str:
        return self.tag


def parse_scenario(text) -> Scenario:
    """Parse "I", "II", "1", "2", or a fraction such as "0.05" into a Scenario."""
    if isinstance(text, Scenario):
        return text
    value = str(text).strip()
    upper = value.upper()
    if upper in ("I", "1", "S1"):
        return Scenario(SCENARIO_I)
    if upper in ("II", "2", "S2"):
        return Scenario(SCENARIO_II)
    if upper.startswith("CONTAMINATED(") and upper.endswith(")"):
        value = value[len("contaminated("):-1]
    try:
        fraction = float(value)
    except ValueError:
        raise ConfigError(f"Unknown scenario '{text}' (expected I, II or a contamination fraction)")
    return Scenario(CONTAMINATED, fraction)


@dataclass(frozen=True, eq=False)
class ScenarioSplit:
    scenario: Scenario
    train: Dataset
    eval: Dataset
    seed: int


def contaminated_outlier_count(n_inliers: int, fraction: float) -> int:
    """Outliers needed so they make up ``fraction`` of the train set.

    Rounds to the nearest count with exact halves going down, so the result
    never overshoots the requested fraction by a half sample.
    """
    exact = fraction * n_inliers / (1.0 - fraction)
    return max(0, math.ceil(exact - 0.5))


def split_scenario(ds: Dataset, scenario, seed: int = 0) -> ScenarioSplit:
    """
    Build the train set for a scenario; the eval set is always the full dataset.

    Args:
        ds: Labeled dataset
        scenario: Scenario or anything parse_scenario accepts
        seed: Seed for drawing the contaminating outlier subset

    Returns:
        ScenarioSplit: Train/eval datasets

    Raises:
        DatasetError: Missing labels or not enough outliers for the fraction
    """
    scenario = parse_scenario(scenario)
    if ds.labels is None:
        raise DatasetError(f"Scenario {scenario.tag} needs a labeled dataset, '{ds.name}' has no labels")

    inlier_rows = np.flatnonzero(ds.labels == 0)
    outlier_rows = np.flatnonzero(ds.labels == 1)

    if scenario.kind == SCENARIO_I:
        train = ds
    elif scenario.kind == SCENARIO_II:
        train = ds.subset(inlier_rows)
    else:
        n_out = contaminated_outlier_count(len(inlier_rows), scenario.fraction)
        if n_out > len(outlier_rows):
            raise DatasetError(
                f"Contamination {scenario.fraction:g} needs {n_out} outliers but '{ds.name}' has {len(outlier_rows)}"
            )
        rng = make_rng(seed)
        chosen = rng.choice(outlier_rows, size=n_out, replace=False) if n_out else np.empty(0, dtype=np.int64)
        # keep original row order in the train set
        rows = np.sort(np.concatenate([inlier_rows, chosen]))
        train = ds.subset(rows)

    if train.n < 1:
        raise DatasetError(f"Scenario {scenario.tag} leaves no training rows in '{ds.name}'")

    logger.debug(f"Scenario {scenario.tag} on '{ds.name}': train n={train.n}, outliers={int(train.labels.sum())}")
    return ScenarioSplit(scenario, train, ds, seed)


def resolve_training(ds: Dataset, scenario, seed: int = 0):
    """(train, eval) datasets for a scenario.

    Unlabeled data is accepted under Scenario I only, where no split is needed.
    """
    scenario = parse_scenario(scenario)
    if ds.labels is None and scenario.kind == SCENARIO_I:
        return ds, ds
    split = split_scenario(ds, scenario, seed)
    return split.train, split.eval
