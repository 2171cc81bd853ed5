"""Detection and ranking metrics."""
import logging
from typing import Dict, Optional

import numpy as np
from scipy import stats

from ..errors import MetricError
from ..forest.forest import anomaly_scores, top_k_count

logger = logging.getLogger(__name__)


def _check_pair(scores, labels):
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise MetricError(f"scores and labels must be 1-D of equal length, got {scores.shape} and {labels.shape}")
    return scores, labels.astype(np.int64)


def average_precision(scores, labels) -> float:
    """Mean of precision@rank over the positives, ranked by descending score (ties by index)."""
    scores, labels = _check_pair(scores, labels)
    n_pos = int(labels.sum())
    if n_pos == 0:
        raise MetricError("Average precision needs at least one positive label")
    ranked = labels[np.argsort(-scores, kind="stable")]
    hits = np.cumsum(ranked)
    ranks = np.arange(1, ranked.size + 1)
    precisions = hits[ranked == 1] / ranks[ranked == 1]
    return float(precisions.sum() / n_pos)


def roc_auc(scores, labels) -> float:
    """P(score_pos > score_neg) + 0.5 * P(equal), via average ranks."""
    scores, labels = _check_pair(scores, labels)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise MetricError("ROC AUC needs both classes present")
    ranks = stats.rankdata(scores, method="average")
    rank_sum = float(ranks[labels == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def precision_at_contamination(scores, labels, contamination: float) -> float:
    """Precision of the top round(contamination * n) scored points."""
    scores, labels = _check_pair(scores, labels)
    if not (0.0 < contamination < 1.0):
        raise MetricError(f"contamination must be in (0, 1), got {contamination}")
    k = top_k_count(contamination, scores.size)
    if k == 0:
        return 0.0
    top = np.argsort(-scores, kind="stable")[:k]
    return float(labels[top].sum() / k)


def ndcg(predicted_ranking, relevance) -> float:
    """
    Normalised discounted cumulative gain of a feature ranking.

    Args:
        predicted_ranking: Feature indices, most important first
        relevance: Ground-truth gain per feature

    Returns:
        float: DCG / IDCG in [0, 1]
    """
    ranking = np.asarray(predicted_ranking, dtype=np.int64)
    relevance = np.asarray(relevance, dtype=np.float64)
    p = relevance.size
    if sorted(ranking.tolist()) != list(range(p)):
        raise MetricError(f"Ranking {ranking.tolist()} is not a permutation of 0..{p - 1}")
    if np.any(relevance < 0):
        raise MetricError("Relevance gains must be non-negative")
    if not np.any(relevance > 0):
        raise MetricError("Relevance vector has no positive gain")
    # positions start at 1
    discounts = np.log2(np.arange(2, p + 2, dtype=np.float64))
    dcg = float((relevance[ranking] / discounts).sum())
    idcg = float((np.sort(relevance)[::-1] / discounts).sum())
    return dcg / idcg


def auc_fs(inverse_curve, direct_curve) -> float:
    """Trapezoid area of the inverse curve minus that of the direct curve, unit step."""
    inverse_curve = np.asarray(inverse_curve, dtype=np.float64)
    direct_curve = np.asarray(direct_curve, dtype=np.float64)
    if inverse_curve.shape != direct_curve.shape or inverse_curve.ndim != 1:
        raise MetricError(f"Curves differ in length: {inverse_curve.shape} vs {direct_curve.shape}")
    if inverse_curve.size == 0:
        raise MetricError("Curves are empty")
    return float(np.trapezoid(inverse_curve) - np.trapezoid(direct_curve))


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise MetricError(f"Series differ in shape: {x.shape} vs {y.shape}")
    if x.size < 3:
        raise MetricError(f"Correlation needs at least 3 points, got {x.size}")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise MetricError("Correlation is undefined for a constant series")
    return float(stats.pearsonr(x, y).statistic)


def detection_report(forest, ds, contamination: Optional[float] = None) -> Dict[str, float]:
    """
    AP, precision at contamination and ROC AUC of a forest on a labeled dataset.

    Args:
        forest: Fitted forest
        ds: Labeled evaluation dataset
        contamination: Threshold fraction (defaults to the true contamination)
    """
    if ds.labels is None:
        raise MetricError(f"Detection metrics need labels, '{ds.name}' has none")
    contamination = ds.contamination if contamination is None else contamination
    scores = anomaly_scores(forest, ds.features)
    return {
        "avg_precision": average_precision(scores, ds.labels),
        "precision": precision_at_contamination(scores, ds.labels, contamination),
        "roc_auc": roc_auc(scores, ds.labels),
    }
