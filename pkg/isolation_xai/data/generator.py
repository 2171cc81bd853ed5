"""Synthetic benchmark datasets.

Inliers are drawn uniformly inside a p-dimensional ball of radius r. Outliers
are pushed along a direction vector u: every anomalous feature gets
``d*u_i + x*u_i`` with a displacement ``x ~ U[min, max]`` drawn once per row,
plus unit Gaussian noise on every feature.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from ..errors import DatasetError
from ..utils.seeding import make_rng
from .dataset import Dataset

logger = logging.getLogger(__name__)

# Rejection-sampling batch size for the inlier ball
_BATCH_SIZE = 4096


@dataclass(frozen=True)
class SyntheticSpec:
    n_inliers: int
    n_outliers: int
    p: int
    r: float
    d: float
    u_raw: Tuple[float, ...]
    value_range: Tuple[float, float] = (0.0, 5.0)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_inliers < 0 or self.n_outliers < 0:
            raise DatasetError("n_inliers and n_outliers must be non-negative")
        if self.p < 1:
            raise DatasetError(f"p must be at least 1, got {self.p}")
        if self.r <= 0:
            raise DatasetError(f"Inlier radius r must be positive, got {self.r}")
        if len(self.u_raw) != self.p:
            raise DatasetError(f"u_raw has {len(self.u_raw)} entries for p={self.p}")
        low, high = self.value_range
        if low > high:
            raise DatasetError(f"value_range min {low} exceeds max {high}")

    @property
    def direction(self) -> np.ndarray:
        """Unit direction u = u_raw / ||u_raw||."""
        u_raw = np.asarray(self.u_raw, dtype=np.float64)
        norm = np.linalg.norm(u_raw)
        if norm == 0:
            raise DatasetError("u_raw must have at least one nonzero entry")
        return u_raw / norm


def generate_inliers(synth: SyntheticSpec, rng) -> np.ndarray:
    """Uniform points of [-r, r]^p accepted when their Euclidean norm is <= r."""
    accepted: List[np.ndarray] = []
    filled = 0
    while filled < synth.n_inliers:
        batch = rng.uniform(-synth.r, synth.r, size=(_BATCH_SIZE, synth.p))
        batch = batch[np.linalg.norm(batch, axis=1) <= synth.r]
        accepted.append(batch)
        filled += batch.shape[0]
    if not accepted:
        return np.empty((0, synth.p), dtype=np.float64)
    return np.concatenate(accepted, axis=0)[: synth.n_inliers]


def generate_outliers(synth: SyntheticSpec, rng) -> np.ndarray:
    """Outlier rows along the configured direction.

    The rng only needs ``uniform`` and ``standard_normal``, so tests can pass a
    stub that returns zeros.
    """
    u = synth.direction
    anomalous = np.asarray(synth.u_raw, dtype=np.float64) != 0
    n = synth.n_outliers
    low, high = synth.value_range

    # one displacement per row, shared by all anomalous features of that row
    shift = np.asarray(rng.uniform(low, high, size=n), dtype=np.float64).reshape(n, 1)
    noise = np.asarray(rng.standard_normal((n, synth.p)), dtype=np.float64).reshape(n, synth.p)

    rows = noise.copy()
    rows[:, anomalous] += (synth.d + shift) * u[anomalous]
    return rows


def generate_dataset(synth: SyntheticSpec, name: str = "synthetic") -> Dataset:
    """Inliers followed by outliers, labeled, from a single seeded generator."""
    rng = make_rng(synth.seed)
    inliers = generate_inliers(synth, rng)
    outliers = generate_outliers(synth, rng)
    features = np.concatenate([inliers, outliers], axis=0)
    labels = np.concatenate([np.zeros(synth.n_inliers, dtype=np.int64), np.ones(synth.n_outliers, dtype=np.int64)])
    return Dataset(name, features, _feature_names(synth.p), labels)


def _feature_names(p: int) -> List[str]:
    return [f"feature_{i}" for i in range(p)]


# ==============================================================================
# Presets
# ==============================================================================
# Direction weights of the six-dimensional presets
PRESET_DIRECTIONS: Dict[str, Tuple[float, ...]] = {
    "xaxis": (1, 0, 0, 0, 0, 0),
    "bisect": (1, 1, 0, 0, 0, 0),
    "bisect3d": (1, 1, 1, 0, 0, 0),
    "bisect3d_skewed": (4, 3, 2, 0, 0, 0),
    "bisect6d": (1, 1, 1, 1, 1, 1),
}

# Bimodal layout: two inlier clusters on the bisector, outliers on the anti-bisector
BIMODAL_CENTERS = ((4.0, 4.0), (-4.0, -4.0))
BIMODAL_CLUSTER_SIZE = 500
BIMODAL_OUTLIER_CENTERS = ((5.0, -5.0), (-5.0, 5.0))
BIMODAL_OUTLIERS_PER_CENTER = 13

PRESET_NAMES = tuple(PRESET_DIRECTIONS) + ("bimodal",)


def preset_spec(name: str, seed: int = 0) -> SyntheticSpec:
    """SyntheticSpec of a six-dimensional preset (1000 inliers, 100 outliers, r=5, d=5, range [0,5])."""
    key = name.lower()
    if key not in PRESET_DIRECTIONS:
        raise DatasetError(f"Unknown preset '{name}' (available: {', '.join(PRESET_NAMES)})")
    return SyntheticSpec(
        n_inliers=1000,
        n_outliers=100,
        p=6,
        r=5.0,
        d=5.0,
        u_raw=tuple(float(v) for v in PRESET_DIRECTIONS[key]),
        value_range=(0.0, 5.0),
        seed=seed,
    )


def make_bimodal(seed: int = 0) -> Dataset:
    rng = make_rng(seed)
    clusters = [
        rng.standard_normal((BIMODAL_CLUSTER_SIZE, 2)) + np.asarray(center)
        for center in BIMODAL_CENTERS
    ]
    outliers = [
        rng.standard_normal((BIMODAL_OUTLIERS_PER_CENTER, 2)) + np.asarray(center)
        for center in BIMODAL_OUTLIER_CENTERS
    ]
    n_inliers = BIMODAL_CLUSTER_SIZE * len(BIMODAL_CENTERS)
    n_outliers = BIMODAL_OUTLIERS_PER_CENTER * len(BIMODAL_OUTLIER_CENTERS)
    features = np.concatenate(clusters + outliers, axis=0)
    labels = np.concatenate([np.zeros(n_inliers, dtype=np.int64), np.ones(n_outliers, dtype=np.int64)])
    return Dataset("bimodal", features, _feature_names(2), labels)


def make_preset(name: str, seed: int = 0) -> Dataset:
    """
    Build a labeled benchmark dataset by preset name (case-insensitive).

    Args:
        name: One of xaxis, bisect, bisect3d, bisect3d_skewed, bisect6d, bimodal
        seed: Generator seed

    Returns:
        Dataset: Inlier rows first, then outlier rows (label 1)
    """
    key = name.lower()
    if key == "bimodal":
        ds = make_bimodal(seed)
    else:
        ds = generate_dataset(preset_spec(key, seed), name=key)
    logger.info(f"Generated preset '{key}' (seed={seed}): n={ds.n}, p={ds.p}, contamination={ds.contamination:.4f}")
    return ds


def relevance_for_preset(name: str) -> np.ndarray:
    """Ground-truth feature relevance |u_raw| of a preset (bimodal: both features)."""
    key = name.lower()
    if key == "bimodal":
        return np.ones(2, dtype=np.float64)
    if key not in PRESET_DIRECTIONS:
        raise DatasetError(f"Unknown preset '{name}' (available: {', '.join(PRESET_NAMES)})")
    return np.abs(np.asarray(PRESET_DIRECTIONS[key], dtype=np.float64))
