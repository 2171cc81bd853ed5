import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..data.dataset import Dataset
from ..data.scenario import resolve_training
from ..errors import ConfigError, ExplainError
from ..forest.forest import ForestConfig, fit
from ..forest.tree import MODEL_IF
from ..utils.parallel import run_parallel
from ..utils.seeding import derive_seed
from ..utils.summation import ordered_mean
from .diffi import diffi_gfi
from .exiffi import exiffi_gfi

logger = logging.getLogger(__name__)

EXPLAINER_EXIFFI = "exiffi"
EXPLAINER_DIFFI = "diffi"
EXPLAINERS = (EXPLAINER_EXIFFI, EXPLAINER_DIFFI)


def parse_explainer(name: str) -> str:
    key = str(name).strip().lower()
    if key not in EXPLAINERS:
        raise ConfigError(f"Unknown explainer '{name}' (expected one of: {', '.join(EXPLAINERS)})")
    return key


def gfi_ranking(gfi: np.ndarray) -> np.ndarray:
    """Feature indices by importance, highest first; ties keep the lower index first."""
    return np.argsort(-np.asarray(gfi, dtype=np.float64), kind="stable")


def compute_gfi(forest, ds, explainer: str, contamination: float, signed: Optional[bool] = None) -> np.ndarray:
    explainer = parse_explainer(explainer)
    if explainer == EXPLAINER_DIFFI:
        return diffi_gfi(forest, ds, contamination)
    return exiffi_gfi(forest, ds, contamination, signed)


@dataclass(eq=False)
class GfiReport:
    """GFI aggregated over refits; ``rank_histogram[f, k]`` counts runs placing feature f at rank k."""
    feature_names: List[str]
    per_feature_mean: np.ndarray
    per_feature_std: np.ndarray
    rank_histogram: np.ndarray
    n_runs: int
    runs: np.ndarray

    def ranking(self) -> np.ndarray:
        return gfi_ranking(self.per_feature_mean)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_runs": self.n_runs,
            "feature_names": list(self.feature_names),
            "per_feature_mean": [float(v) for v in self.per_feature_mean],
            "per_feature_std": [float(v) for v in self.per_feature_std],
            "rank_histogram": [[int(c) for c in row] for row in self.rank_histogram],
        }

    def histogram_frame(self) -> pd.DataFrame:
        """Long format: feature, rank (1 = most important), count."""
        p = len(self.feature_names)
        return pd.DataFrame({
            "feature": np.repeat(np.arange(p), p),
            "rank": np.tile(np.arange(1, p + 1), p),
            "count": self.rank_histogram.reshape(-1),
        })

    def summary_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "feature": np.arange(len(self.feature_names)),
            "name": self.feature_names,
            "mean": self.per_feature_mean,
            "std": self.per_feature_std,
        })


def report_from_runs(runs: np.ndarray, feature_names: List[str]) -> GfiReport:
    """Aggregate an n_runs x p matrix of GFI vectors."""
    runs = np.asarray(runs, dtype=np.float64)
    n_runs, p = runs.shape
    mean = ordered_mean(runs, axis=0)
    std = np.sqrt(ordered_mean((runs - mean) ** 2, axis=0))
    histogram = np.zeros((p, p), dtype=np.int64)
    for gfi in runs:
        histogram[gfi_ranking(gfi), np.arange(p)] += 1
    return GfiReport(list(feature_names), mean, std, histogram, n_runs, runs)


def gfi_over_runs(ds: Dataset, config: ForestConfig, explainer: str, n_runs: int, contamination: float,
                  base_seed: int, scenario="I", signed: Optional[bool] = None,
                  max_concurrent: Optional[int] = None) -> GfiReport:
    """
    Refit the forest n_runs times with derived seeds and aggregate the GFI vectors.

    Args:
        ds: Dataset to explain (also the evaluation set)
        config: Forest configuration; its seed is replaced per run
        explainer: "exiffi" or "diffi"
        n_runs: Number of refits
        contamination: Threshold fraction for the predicted classes
        base_seed: Master seed of the runs
        scenario: Training scenario (I, II or a contamination fraction)
        signed: ExIFFI signed-normal toggle
        max_concurrent: Runs fitted at once

    Returns:
        GfiReport: Mean, population std and rank histogram over runs
    """
    explainer = parse_explainer(explainer)
    if n_runs < 1:
        raise ConfigError(f"n_runs must be at least 1, got {n_runs}")
    if explainer == EXPLAINER_DIFFI and config.model != MODEL_IF:
        raise ExplainError(f"DIFFI is defined for IF forests only, got {config.model}")

    logger.info("=" * 50)
    logger.info(f"GFI report: {explainer} on {config.model}, '{ds.name}', {n_runs} runs, scenario {scenario}")

    def one_run(run: int) -> np.ndarray:
        run_seed = derive_seed(base_seed, run)
        train, evaluation = resolve_training(ds, scenario, run_seed)
        forest = fit(train, config.with_seed(run_seed), max_concurrent=1)
        return compute_gfi(forest, evaluation, explainer, contamination, signed)

    runs = np.stack(run_parallel(one_run, range(n_runs), max_concurrent), axis=0)
    report = report_from_runs(runs, ds.feature_names)

    logger.info(f"GFI ranking (mean over runs): {report.ranking().tolist()}")
    logger.info("=" * 50)
    return report
