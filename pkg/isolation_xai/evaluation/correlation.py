import logging

from ..data.dataset import Dataset
from ..errors import MetricError
from ..explain.exiffi import exiffi_lfi_matrix
from ..forest.forest import Forest, anomaly_scores
from .metrics import pearson

logger = logging.getLogger(__name__)


def lfi_score_correlation(forest: Forest, ds: Dataset) -> float:
    """Pearson correlation between the summed LFI of each row and its anomaly score."""
    if ds.n < 3:
        raise MetricError(f"Correlation needs at least 3 rows, '{ds.name}' has {ds.n}")
    lfi_totals = exiffi_lfi_matrix(forest, ds.features).sum(axis=1)
    scores = anomaly_scores(forest, ds.features)
    return pearson(lfi_totals, scores)
