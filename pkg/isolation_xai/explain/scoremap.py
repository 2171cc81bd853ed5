import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..config.settings import default_scoremap_padding, default_scoremap_resolution
from ..data.dataset import Dataset
from ..errors import ExplainError
from ..forest.forest import Forest, anomaly_scores
from .exiffi import exiffi_lfi_matrix

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class ScoremapGrid:
    """LFI winner map over a 2-D slice; grids are indexed [x index, y index]."""
    feat_i: int
    feat_j: int
    xs: np.ndarray
    ys: np.ndarray
    winner: np.ndarray
    magnitude: np.ndarray
    anomaly: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        """Long format: x, y, winner, magnitude, anomaly."""
        gx, gy = np.meshgrid(self.xs, self.ys, indexing="ij")
        return pd.DataFrame({
            "x": gx.reshape(-1),
            "y": gy.reshape(-1),
            "winner": self.winner.reshape(-1),
            "magnitude": self.magnitude.reshape(-1),
            "anomaly": self.anomaly.reshape(-1),
        })

    def to_dict(self) -> Dict[str, Any]:
        return {
            "feat_i": self.feat_i,
            "feat_j": self.feat_j,
            "xs": self.xs.tolist(),
            "ys": self.ys.tolist(),
            "winner": self.winner.tolist(),
            "magnitude": self.magnitude.tolist(),
            "anomaly": self.anomaly.tolist(),
        }


def _axis(values: np.ndarray, resolution: int, padding: float) -> np.ndarray:
    low = float(values.min())
    high = float(values.max())
    # padding is a fraction of the feature range; a constant feature pads by the raw amount
    span = high - low
    pad = padding * span if span > 0 else padding
    return np.linspace(low - pad, high + pad, resolution)


def scoremap_grid(forest: Forest, ds: Dataset, feat_i: int, feat_j: int,
                  resolution: Optional[int] = None, padding: Optional[float] = None) -> ScoremapGrid:
    """
    Local importance scoremap over features (feat_i, feat_j).

    Every grid point is the dataset's feature-wise mean with the two selected
    coordinates replaced. The winner is whichever of the two features has the
    larger LFI component; exact ties go to the lower feature index.

    Args:
        forest: Fitted forest
        ds: Dataset giving the grid extent and the fixed coordinates
        feat_i, feat_j: Distinct feature indices (x and y axes)
        resolution: Grid points per axis, at least 2
        padding: Extension beyond the data range, as a fraction of that range

    Returns:
        ScoremapGrid: resolution x resolution layers
    """
    resolution = default_scoremap_resolution if resolution is None else int(resolution)
    padding = default_scoremap_padding if padding is None else float(padding)
    p = ds.p
    for feat in (feat_i, feat_j):
        if not 0 <= feat < p:
            raise ExplainError(f"Feature index {feat} out of range for p={p}")
    if feat_i == feat_j:
        raise ExplainError(f"Scoremap needs two different features, got {feat_i} twice")
    if resolution < 2:
        raise ExplainError(f"Scoremap resolution must be at least 2, got {resolution}")
    if padding < 0:
        raise ExplainError(f"Scoremap padding must be non-negative, got {padding}")

    xs = _axis(ds.features[:, feat_i], resolution, padding)
    ys = _axis(ds.features[:, feat_j], resolution, padding)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")

    points = np.tile(ds.features.mean(axis=0), (resolution * resolution, 1))
    points[:, feat_i] = gx.reshape(-1)
    points[:, feat_j] = gy.reshape(-1)

    lfi = exiffi_lfi_matrix(forest, points)
    low, high = min(feat_i, feat_j), max(feat_i, feat_j)
    high_wins = lfi[:, high] > lfi[:, low]
    winner = np.where(high_wins, high, low)
    magnitude = np.where(high_wins, lfi[:, high], lfi[:, low])
    anomaly = anomaly_scores(forest, points)

    shape = (resolution, resolution)
    return ScoremapGrid(feat_i, feat_j, xs, ys, winner.reshape(shape), magnitude.reshape(shape), anomaly.reshape(shape))


def complete_scoremap(forest: Forest, ds: Dataset, resolution: Optional[int] = None,
                      padding: Optional[float] = None) -> List[ScoremapGrid]:
    """Scoremaps of every feature pair i < j."""
    grids = []
    for feat_i, feat_j in combinations(range(ds.p), 2):
        logger.debug(f"Scoremap for features ({feat_i}, {feat_j})")
        grids.append(scoremap_grid(forest, ds, feat_i, feat_j, resolution, padding))
    logger.info(f"Computed {len(grids)} scoremaps for '{ds.name}'")
    return grids
