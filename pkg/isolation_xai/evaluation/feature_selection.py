"""Feature-selection proxy task.

A good importance ranking keeps detection quality high while the least
important features are dropped (inverse order) and destroys it quickly when
the most important ones go first (direct order). AUC_FS is the area between
the two curves.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..config.settings import feature_selection_refit
from ..data.dataset import Dataset
from ..data.scenario import resolve_training
from ..errors import ConfigError, MetricError
from ..forest.forest import ForestConfig, anomaly_scores, fit
from ..utils.parallel import run_parallel
from ..utils.seeding import derive_seed, make_rng
from .metrics import auc_fs, average_precision

logger = logging.getLogger(__name__)

ORDER_DIRECT = "direct"
ORDER_INVERSE = "inverse"
ORDER_RANDOM = "random"

# Seed stream of the random drop order, apart from the per-step streams 0..p-1
_RANDOM_ORDER_STREAM = 1 << 32


@dataclass(eq=False)
class FeatureSelectionCurve:
    """``ap_values[i]`` is the AP with i features dropped."""
    order: str
    ap_values: List[float]
    kept: List[List[int]]

    def to_dict(self) -> Dict:
        return {"order": self.order, "ap_values": list(self.ap_values), "kept": [list(k) for k in self.kept]}


def _kept_per_step(drop_order: Sequence[int], p: int, from_front: bool) -> List[Tuple[int, ...]]:
    steps = []
    for i in range(p):
        survivors = drop_order[i:] if from_front else drop_order[:p - i]
        steps.append(tuple(sorted(int(f) for f in survivors)))
    return steps


def feature_selection_curves(ds: Dataset, ranking: Sequence[int], evaluator: ForestConfig, scenario="II",
                             seed: int = 0, refit: Optional[bool] = None,
                             max_concurrent: Optional[int] = None) -> Dict[str, FeatureSelectionCurve]:
    """
    Direct, inverse and random feature-selection curves.

    Step i uses the seed derive_seed(seed, i) for the split and the evaluator,
    shared by all three curves.

    Args:
        ds: Labeled dataset
        ranking: Feature indices by importance, most important first
        evaluator: Forest configuration fitted to score each feature subset
        scenario: Training scenario of the evaluator
        seed: Master seed
        refit: Refit the evaluator at every step (default ISOXAI_FS_REFIT); when
            off, one evaluator sees all features and dropped ones are set to
            their training mean
        max_concurrent: Steps evaluated at once

    Returns:
        dict: Curves keyed by "direct", "inverse" and "random"
    """
    if ds.labels is None:
        raise MetricError(f"Feature selection needs labels, '{ds.name}' has none")
    p = ds.p
    ranking = [int(f) for f in ranking]
    if sorted(ranking) != list(range(p)):
        raise ConfigError(f"Ranking {ranking} is not a permutation of 0..{p - 1}")
    refit = feature_selection_refit if refit is None else refit

    random_order = make_rng(derive_seed(seed, _RANDOM_ORDER_STREAM)).permutation(p).tolist()
    steps = {
        ORDER_DIRECT: _kept_per_step(ranking, p, from_front=True),
        ORDER_INVERSE: _kept_per_step(ranking, p, from_front=False),
        ORDER_RANDOM: _kept_per_step(random_order, p, from_front=True),
    }

    # identical (step, subset) cells share one evaluation
    jobs = sorted({(i, kept) for kept_list in steps.values() for i, kept in enumerate(kept_list)})

    if refit:
        def evaluate(job):
            step, kept = job
            step_seed = derive_seed(seed, step)
            train, evaluation = resolve_training(ds, scenario, step_seed)
            forest = fit(train.select_features(kept), evaluator.with_seed(step_seed), max_concurrent=1)
            return average_precision(anomaly_scores(forest, evaluation.features[:, list(kept)]), evaluation.labels)
    else:
        train, evaluation = resolve_training(ds, scenario, derive_seed(seed, 0))
        forest = fit(train, evaluator.with_seed(derive_seed(seed, 0)), max_concurrent=1)
        train_mean = train.features.mean(axis=0)

        def evaluate(job):
            _, kept = job
            X = evaluation.features.copy()
            dropped = [f for f in range(p) if f not in kept]
            X[:, dropped] = train_mean[dropped]
            return average_precision(anomaly_scores(forest, X), evaluation.labels)

    logger.info(f"Feature selection on '{ds.name}': {len(jobs)} evaluations, evaluator {evaluator.model}, refit={refit}")
    results = dict(zip(jobs, run_parallel(evaluate, jobs, max_concurrent)))

    return {
        order: FeatureSelectionCurve(
            order=order,
            ap_values=[results[(i, kept)] for i, kept in enumerate(kept_list)],
            kept=[list(kept) for kept in kept_list],
        )
        for order, kept_list in steps.items()
    }


def curves_auc_fs(curves: Dict[str, FeatureSelectionCurve]) -> float:
    return auc_fs(curves[ORDER_INVERSE].ap_values, curves[ORDER_DIRECT].ap_values)
