"""Multi-seed evaluation protocols.

Every protocol returns a long-format table with the columns
dataset, model, scenario, level, seed, metric, value.
"""
import time
import logging
from dataclasses import replace
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..config.settings import eta_sweep_max, eta_sweep_min, eta_sweep_points
from ..data.dataset import Dataset
from ..data.scenario import CONTAMINATED, Scenario, parse_scenario, resolve_training
from ..errors import ConfigError
from ..explain.exiffi import exiffi_importances
from ..explain.gfi_report import compute_gfi, gfi_ranking
from ..forest.forest import ForestConfig, anomaly_scores, fit
from ..forest.tree import MODEL_EIF, MODEL_EIF_PLUS
from ..utils.parallel import run_parallel
from ..utils.seeding import derive_seed, make_rng
from .correlation import lfi_score_correlation
from .feature_selection import curves_auc_fs, feature_selection_curves
from .metrics import average_precision, detection_report, ndcg

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["dataset", "model", "scenario", "level", "seed", "metric", "value"]


def make_table(rows: List[Dict]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)


def summarise(table: pd.DataFrame) -> pd.DataFrame:
    """Mean, std and count of value per (dataset, model, scenario, level, metric)."""
    keys = ["dataset", "model", "scenario", "level", "metric"]
    grouped = table.groupby(keys, dropna=False, sort=True)["value"]
    summary = grouped.agg(mean="mean", std=lambda v: float(np.std(v.to_numpy())), count="count")
    return summary.reset_index()


def _row(ds: Dataset, model: str, scenario: str, level, seed: int, metric: str, value: float) -> Dict:
    return {
        "dataset": ds.name,
        "model": model,
        "scenario": scenario,
        "level": level,
        "seed": seed,
        "metric": metric,
        "value": float(value),
    }


def seeds_for(base_seed: int, n_seeds: int) -> List[int]:
    if n_seeds < 1:
        raise ConfigError(f"n_seeds must be at least 1, got {n_seeds}")
    return [derive_seed(base_seed, k) for k in range(n_seeds)]


def detection_sweep(ds: Dataset, configs: Sequence[ForestConfig], scenario="II", n_seeds: int = 10,
                    base_seed: int = 0, max_concurrent: Optional[int] = None) -> pd.DataFrame:
    """AP, precision and ROC AUC per (config, seed) for one scenario."""
    scenario = parse_scenario(scenario)
    cells = [(config, seed) for config in configs for seed in seeds_for(base_seed, n_seeds)]

    def run_cell(cell):
        config, seed = cell
        train, evaluation = resolve_training(ds, scenario, seed)
        forest = fit(train, config.with_seed(seed), max_concurrent=1)
        metrics = detection_report(forest, evaluation)
        return [_row(ds, config.model, scenario.tag, None, seed, name, value) for name, value in metrics.items()]

    return make_table([row for rows in run_parallel(run_cell, cells, max_concurrent) for row in rows])


def contamination_sweep(ds: Dataset, configs: Sequence[ForestConfig], levels: Sequence[float], n_seeds: int = 10,
                        base_seed: int = 0, max_concurrent: Optional[int] = None) -> pd.DataFrame:
    """
    AP on the full dataset as the train-set outlier fraction grows.

    Args:
        ds: Labeled dataset
        configs: Forest configurations compared
        levels: Train outlier fractions, each within the available contamination
        n_seeds: Seeds per (config, level)
        base_seed: Master seed

    Returns:
        pd.DataFrame: Long table, metric "avg_precision"
    """
    logger.info("=" * 50)
    logger.info(f"Contamination sweep on '{ds.name}': levels={list(levels)}, {len(configs)} models, {n_seeds} seeds")
    cells = [(config, float(level), seed)
             for config in configs for level in levels for seed in seeds_for(base_seed, n_seeds)]

    def run_cell(cell):
        config, level, seed = cell
        scenario = Scenario(CONTAMINATED, level)
        train, evaluation = resolve_training(ds, scenario, seed)
        forest = fit(train, config.with_seed(seed), max_concurrent=1)
        ap = average_precision(anomaly_scores(forest, evaluation.features), evaluation.labels)
        return _row(ds, config.model, scenario.tag, level, seed, "avg_precision", ap)

    table = make_table(run_parallel(run_cell, cells, max_concurrent))
    logger.info("=" * 50)
    return table


def default_etas() -> np.ndarray:
    return np.linspace(eta_sweep_min, eta_sweep_max, eta_sweep_points)


def eta_sweep(ds: Dataset, base_config: ForestConfig, etas: Optional[Sequence[float]] = None, n_seeds: int = 10,
              scenario="II", base_seed: int = 0, max_concurrent: Optional[int] = None) -> pd.DataFrame:
    """EIF+ AP over a grid of eta values, plus EIF reference rows (level empty) at the same seeds."""
    scenario = parse_scenario(scenario)
    etas = default_etas() if etas is None else np.asarray(etas, dtype=np.float64)
    seeds = seeds_for(base_seed, n_seeds)
    cells = [(float(eta), seed) for eta in etas for seed in seeds] + [(None, seed) for seed in seeds]

    def run_cell(cell):
        eta, seed = cell
        train, evaluation = resolve_training(ds, scenario, seed)
        if eta is None:
            config = replace(base_config, model=MODEL_EIF, seed=seed)
        else:
            config = replace(base_config, model=MODEL_EIF_PLUS, eta=eta, seed=seed)
        forest = fit(train, config, max_concurrent=1)
        ap = average_precision(anomaly_scores(forest, evaluation.features), evaluation.labels)
        return _row(ds, config.model, scenario.tag, eta, seed, "avg_precision", ap)

    logger.info(f"Eta sweep on '{ds.name}': {len(etas)} values x {n_seeds} seeds")
    return make_table(run_parallel(run_cell, cells, max_concurrent))


def _explained_ranking(ds: Dataset, config: ForestConfig, explainer: str, scenario: Scenario, seed: int,
                       contamination: Optional[float]) -> np.ndarray:
    train, evaluation = resolve_training(ds, scenario, seed)
    forest = fit(train, config.with_seed(seed), max_concurrent=1)
    threshold = evaluation.contamination if contamination is None else contamination
    return gfi_ranking(compute_gfi(forest, evaluation, explainer, threshold))


def explainer_label(config: ForestConfig, explainer: str) -> str:
    """Tag such as EIF+_ExIFFI used in the model column."""
    return f"{config.model}_{'ExIFFI' if explainer.lower() == 'exiffi' else 'DIFFI'}"


def ndcg_evaluation(ds: Dataset, relevance: Sequence[float], config: ForestConfig, explainer: str = "exiffi",
                    n_seeds: int = 10, scenario="II", contamination: Optional[float] = None, base_seed: int = 0,
                    max_concurrent: Optional[int] = None) -> pd.DataFrame:
    """NDCG of the GFI ranking of one fitted forest per seed."""
    scenario = parse_scenario(scenario)
    relevance = np.asarray(relevance, dtype=np.float64)
    label = explainer_label(config, explainer)

    def run_cell(seed):
        ranking = _explained_ranking(ds, config, explainer, scenario, seed, contamination)
        return _row(ds, label, scenario.tag, None, seed, "ndcg", ndcg(ranking, relevance))

    return make_table(run_parallel(run_cell, seeds_for(base_seed, n_seeds), max_concurrent))


def auc_fs_evaluation(ds: Dataset, config: ForestConfig, evaluator: ForestConfig, explainer: str = "exiffi",
                      n_seeds: int = 10, scenario="II", contamination: Optional[float] = None, base_seed: int = 0,
                      refit: Optional[bool] = None, max_concurrent: Optional[int] = None):
    """
    AUC_FS per seed, with the ranking from one fitted forest and curves scored by the evaluator.

    Returns:
        Tuple[pd.DataFrame, dict]: Long table (metric "auc_fs") and the curves per seed
    """
    scenario = parse_scenario(scenario)
    label = explainer_label(config, explainer)
    rows = []
    curves_by_seed = {}
    for seed in seeds_for(base_seed, n_seeds):
        ranking = _explained_ranking(ds, config, explainer, scenario, seed, contamination)
        curves = feature_selection_curves(ds, ranking, evaluator, scenario, seed, refit, max_concurrent)
        curves_by_seed[seed] = {"ranking": ranking.tolist(), **{k: c.to_dict() for k, c in curves.items()}}
        rows.append(_row(ds, label, scenario.tag, None, seed, "auc_fs", curves_auc_fs(curves)))
    return make_table(rows), curves_by_seed


def correlation_evaluation(ds: Dataset, config: ForestConfig, n_seeds: int = 10, scenario="II",
                           base_seed: int = 0, max_concurrent: Optional[int] = None) -> pd.DataFrame:
    """Pearson(summed LFI, anomaly score) over the full dataset, per seed."""
    scenario = parse_scenario(scenario)
    label = explainer_label(config, "exiffi")

    def run_cell(seed):
        train, evaluation = resolve_training(ds, scenario, seed)
        forest = fit(train, config.with_seed(seed), max_concurrent=1)
        return _row(ds, label, scenario.tag, None, seed, "correlation", lfi_score_correlation(forest, evaluation))

    return make_table(run_parallel(run_cell, seeds_for(base_seed, n_seeds), max_concurrent))


# ==============================================================================
# Timing
# ==============================================================================
def _median_time(action: Callable[[], object], repeats: int) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        action()
        times.append(time.perf_counter() - start)
    return float(np.median(times))


def timing_benchmark(sizes: Sequence[int], dims: Sequence[int], config: ForestConfig, repeats: int = 3,
                     base_seed: int = 0, max_concurrent: Optional[int] = None) -> pd.DataFrame:
    """
    Median wall time of fit, predict and ExIFFI importance on Gaussian data.

    Returns:
        pd.DataFrame: Columns n, p, model, phase, seconds
    """
    rows = []
    for n in sizes:
        for p in dims:
            X = make_rng(derive_seed(base_seed, int(n) * 1_000_003 + int(p))).standard_normal((int(n), int(p)))
            cell_config = config.with_seed(base_seed)
            forest = fit(X, cell_config, max_concurrent=max_concurrent)
            phases = {
                "fit": lambda: fit(X, cell_config, max_concurrent=max_concurrent),
                "predict": lambda: anomaly_scores(forest, X),
                "importance": lambda: exiffi_importances(forest, X),
            }
            for phase, action in phases.items():
                seconds = _median_time(action, repeats)
                rows.append({"n": int(n), "p": int(p), "model": config.model, "phase": phase, "seconds": seconds})
                logger.info(f"Timing n={n}, p={p}, {phase}: {seconds:.4f}s")
    return pd.DataFrame(rows, columns=["n", "p", "model", "phase", "seconds"])
