import logging
from collections import defaultdict
from typing import Dict, List, Tuple

import numpy as np

from ..data.dataset import Dataset
from ..forest.forest import Forest
from ..utils.summation import ordered_sum
from .exiffi import side_ratio

logger = logging.getLogger(__name__)


def depth_profile(forest: Forest, ds, depth_weighted: bool = False) -> List[Tuple[int, float]]:
    """
    Mean L1 norm of the per-node ExIFFI importance, grouped by node depth.

    Every (point, internal node on its path) pair contributes one value.

    Args:
        forest: Fitted forest
        ds: Dataset (or n x p matrix) whose points are routed
        depth_weighted: Divide each value by depth + 1

    Returns:
        list: (depth, mean) pairs sorted by depth
    """
    X = ds.features if isinstance(ds, Dataset) else np.asarray(ds, dtype=np.float64)
    X = forest._check_dims(X)
    values: Dict[int, List[np.ndarray]] = defaultdict(list)

    for tree in forest.trees:
        for node, idx in tree.route(X):
            if node.is_leaf:
                continue
            l1 = float(np.abs(node.plane.normal).sum())
            mask = node.plane.goes_left(X[idx])
            ratios = np.where(mask, side_ratio(node, True), side_ratio(node, False))
            contributions = ratios * l1
            if depth_weighted:
                contributions = contributions / (node.depth + 1)
            values[node.depth].append(contributions)

    profile = []
    for depth in sorted(values):
        merged = np.concatenate(values[depth])
        profile.append((depth, float(ordered_sum(merged) / merged.size)))
    return profile
