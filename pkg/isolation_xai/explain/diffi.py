"""DIFFI importances for axis-aligned (IF) forests."""
import math
import logging
from typing import Tuple

import numpy as np

from ..data.dataset import Dataset
from ..errors import ExplainError
from ..forest.forest import Forest, predict_labels
from ..forest.tree import MODEL_IF, InternalNode, IsolationTree
from ..utils.summation import ordered_sum, safe_divide
from .exiffi import class_rows

logger = logging.getLogger(__name__)


def diffi_node_lambda(node: InternalNode) -> float:
    """Induced imbalance of a split: 0 with an empty side, else in [0.5, 1]."""
    if node.plane.split_feature is None:
        raise ExplainError("DIFFI needs axis-aligned splits, got an oblique node")
    n = node.size
    n_left, n_right = node.left_size, node.right_size
    if n_left == 0 or n_right == 0:
        return 0.0
    a = max(n_left, n_right) / n
    lambda_min = math.ceil(n / 2) / n
    lambda_max = (n - 1) / n
    if lambda_max == lambda_min:
        return 0.5
    return (a - lambda_min) / (2.0 * (lambda_max - lambda_min)) + 0.5


def _check_axis_aligned(forest: Forest) -> None:
    if forest.model != MODEL_IF:
        raise ExplainError(f"DIFFI is defined for IF forests only, got {forest.model}")


def _tree_diffi(tree: IsolationTree, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    n, p = X.shape
    I = np.zeros((n, p), dtype=np.float64)
    V = np.zeros((n, p), dtype=np.float64)
    # leaf-adjusted depth, floored at 1
    depths = np.maximum(tree.path_lengths(X), 1.0)
    for node, idx in tree.route(X):
        if node.is_leaf:
            continue
        feature = node.plane.split_feature
        if feature is None:
            raise ExplainError("DIFFI needs axis-aligned splits, got an oblique node")
        I[idx, feature] += diffi_node_lambda(node) / depths[idx]
        V[idx, feature] += 1.0
    return I, V


def diffi_importances(forest: Forest, X) -> Tuple[np.ndarray, np.ndarray]:
    """Per-row cumulative importance and visit counters, each n x p."""
    _check_axis_aligned(forest)
    if isinstance(X, Dataset):
        X = X.features
    X = forest._check_dims(X)
    per_tree = [_tree_diffi(tree, X) for tree in forest.trees]
    I = ordered_sum(np.stack([pair[0] for pair in per_tree], axis=0), axis=0)
    V = ordered_sum(np.stack([pair[1] for pair in per_tree], axis=0), axis=0)
    return I, V


def diffi_gfi(forest: Forest, ds, contamination: float) -> np.ndarray:
    """
    DIFFI global importance (I_O / V_O) / (I_I / V_I) over the predicted classes.

    Raises:
        ExplainError: Non-IF forest or an empty predicted class
    """
    _check_axis_aligned(forest)
    X = ds.features if isinstance(ds, Dataset) else np.asarray(ds, dtype=np.float64)
    inliers, outliers = class_rows(predict_labels(forest, X, contamination))
    I, V = diffi_importances(forest, X)

    outlier_part = safe_divide(ordered_sum(I[outliers], axis=0), ordered_sum(V[outliers], axis=0))
    inlier_part = safe_divide(ordered_sum(I[inliers], axis=0), ordered_sum(V[inliers], axis=0))
    return safe_divide(outlier_part, inlier_part)
