"""ExIFFI importances for hyperplane-split forests.

At every internal node on a point's path the node contributes
``|X| / |side| * abs(v)`` to I, where ``side`` is the child the point falls
into, and ``abs(v)`` to V. The local importance is LFI = I / V; the global
importance compares normalised outlier and inlier importances, Î_O / Î_I.
"""
import logging
from typing import Optional, Tuple

import numpy as np

from ..config.settings import signed_normals
from ..data.dataset import Dataset
from ..errors import ExplainError
from ..forest.forest import Forest, predict_labels
from ..forest.tree import InternalNode, IsolationTree
from ..utils.summation import ordered_sum, safe_divide

logger = logging.getLogger(__name__)


def side_ratio(node: InternalNode, left: bool) -> float:
    # an empty side counts as one point
    return node.size / max(node.side_size(left), 1)


def node_lambda(node: InternalNode, x: np.ndarray) -> np.ndarray:
    """Importance vector one node gives to point x."""
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    left = bool(node.plane.goes_left(x)[0])
    return side_ratio(node, left) * np.abs(node.plane.normal)


def _tree_importances(tree: IsolationTree, X: np.ndarray, signed: bool) -> Tuple[np.ndarray, np.ndarray]:
    n, p = X.shape
    I = np.zeros((n, p), dtype=np.float64)
    V = np.zeros((n, p), dtype=np.float64)
    for node, idx in tree.route(X):
        if node.is_leaf:
            continue
        abs_normal = np.abs(node.plane.normal)
        v_step = node.plane.normal if signed else abs_normal
        mask = node.plane.goes_left(X[idx])
        for left, rows in ((True, idx[mask]), (False, idx[~mask])):
            if rows.size == 0:
                continue
            I[rows] += side_ratio(node, left) * abs_normal
            V[rows] += v_step
    return I, V


def exiffi_importances(forest: Forest, X, signed: Optional[bool] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cumulative importance I and normal sum V for every row.

    Args:
        forest: Fitted forest (any model)
        X: n x p points or a Dataset
        signed: Accumulate signed normals in V (defaults to ISOXAI_SIGNED_NORMALS)

    Returns:
        Tuple[np.ndarray, np.ndarray]: I and V, each n x p
    """
    if isinstance(X, Dataset):
        X = X.features
    X = forest._check_dims(X)
    signed = signed_normals if signed is None else signed
    per_tree = [_tree_importances(tree, X, signed) for tree in forest.trees]
    I = ordered_sum(np.stack([pair[0] for pair in per_tree], axis=0), axis=0)
    V = ordered_sum(np.stack([pair[1] for pair in per_tree], axis=0), axis=0)
    return I, V


def exiffi_point(forest: Forest, x, signed: Optional[bool] = None) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ExplainError(f"exiffi_point takes a single point, got shape {x.shape}")
    I, V = exiffi_importances(forest, x.reshape(1, -1), signed)
    return I[0], V[0]


def exiffi_lfi_matrix(forest: Forest, X, signed: Optional[bool] = None) -> np.ndarray:
    """Local feature importance I / V per row (0 where V is 0)."""
    I, V = exiffi_importances(forest, X, signed)
    return safe_divide(I, V)


def exiffi_lfi(forest: Forest, x, signed: Optional[bool] = None) -> np.ndarray:
    I, V = exiffi_point(forest, x, signed)
    return safe_divide(I, V)


def class_rows(predicted: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Row indices of predicted inliers and outliers; both must be non-empty."""
    inliers = np.flatnonzero(predicted == 0)
    outliers = np.flatnonzero(predicted == 1)
    if inliers.size == 0 or outliers.size == 0:
        empty = "outlier" if outliers.size == 0 else "inlier"
        raise ExplainError(f"Thresholding left the predicted {empty} set empty, GFI is undefined")
    return inliers, outliers


def exiffi_gfi(forest: Forest, ds, contamination: float, signed: Optional[bool] = None) -> np.ndarray:
    """
    Global feature importance Î_O / Î_I over the predicted classes of ds.

    Raises:
        ExplainError: One of the predicted classes is empty
    """
    X = ds.features if isinstance(ds, Dataset) else np.asarray(ds, dtype=np.float64)
    inliers, outliers = class_rows(predict_labels(forest, X, contamination))
    I, V = exiffi_importances(forest, X, signed)

    normalised_out = safe_divide(ordered_sum(I[outliers], axis=0), ordered_sum(V[outliers], axis=0))
    normalised_in = safe_divide(ordered_sum(I[inliers], axis=0), ordered_sum(V[inliers], axis=0))
    return safe_divide(normalised_out, normalised_in)
