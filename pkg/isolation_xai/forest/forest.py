import math
import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional

import numpy as np

from ..config.settings import default_eta, default_n_trees, default_subsample
from ..data.dataset import Dataset
from ..errors import ConfigError, ForestError
from ..utils.parallel import run_parallel
from ..utils.seeding import derive_seed, make_rng
from ..utils.summation import ordered_mean
from .tree import MODEL_EIF, MODEL_EIF_PLUS, MODEL_IF, MODELS, IsolationTree, build_tree, c_factor

logger = logging.getLogger(__name__)

_MODEL_ALIASES = {
    "if": MODEL_IF,
    "eif": MODEL_EIF,
    "eif+": MODEL_EIF_PLUS,
    "eifplus": MODEL_EIF_PLUS,
    "eif_plus": MODEL_EIF_PLUS,
}


def parse_model(name: str) -> str:
    """Normalise a model name (if, eif, eif+, eifplus; any case) to IF / EIF / EIF+."""
    key = str(name).strip().lower()
    if key not in _MODEL_ALIASES:
        raise ConfigError(f"Unknown model '{name}' (expected one of: {', '.join(MODELS)})")
    return _MODEL_ALIASES[key]


@dataclass(frozen=True)
class ForestConfig:
    """Fit parameters of an isolation forest.

    ``max_depth`` and ``dof`` left as None resolve at fit time to
    ceil(log2 psi) and p. ``dof`` and ``eta`` are ignored by IF.
    """
    model: str = MODEL_EIF_PLUS
    n_trees: int = default_n_trees
    subsample: int = default_subsample
    max_depth: Optional[int] = None
    eta: float = default_eta
    dof: Optional[int] = None
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "model", parse_model(self.model))
        if self.n_trees < 1:
            raise ConfigError(f"n_trees must be at least 1, got {self.n_trees}")
        if self.subsample < 2:
            raise ConfigError(f"subsample must be at least 2, got {self.subsample}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ConfigError(f"max_depth must be at least 1, got {self.max_depth}")
        if not (self.eta > 0 and math.isfinite(self.eta)):
            raise ConfigError(f"eta must be a positive number, got {self.eta}")
        if self.dof is not None and self.dof < 1:
            raise ConfigError(f"dof must be at least 1, got {self.dof}")

    def resolved_dof(self, p: int) -> int:
        if self.model == MODEL_IF:
            return 1
        dof = p if self.dof is None else self.dof
        if dof > p:
            raise ConfigError(f"dof={dof} exceeds the number of features p={p}")
        return dof

    def resolved_max_depth(self, psi: int) -> int:
        if self.max_depth is not None:
            return self.max_depth
        return max(1, math.ceil(math.log2(psi)))

    def with_seed(self, seed: int) -> 'ForestConfig':
        return replace(self, seed=seed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "n_trees": self.n_trees,
            "subsample": self.subsample,
            "max_depth": self.max_depth,
            "eta": self.eta,
            "dof": self.dof,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ForestConfig':
        known = {"model", "n_trees", "subsample", "max_depth", "eta", "dof", "seed"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown forest config keys: {', '.join(sorted(unknown))}")
        return cls(**data)


@dataclass(eq=False)
class Forest:
    config: ForestConfig
    trees: List[IsolationTree]
    n_features: int
    psi: int
    max_depth: int
    fitted_on: str = ""

    @property
    def model(self) -> str:
        return self.config.model

    def _check_dims(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ForestError(f"Expected points with {self.n_features} features, got shape {X.shape}")
        return X

    def path_lengths(self, X: np.ndarray) -> np.ndarray:
        """T x n matrix of leaf-adjusted depths, one row per tree."""
        X = self._check_dims(X)
        return np.stack([tree.path_lengths(X) for tree in self.trees], axis=0)

    def mean_depths(self, X: np.ndarray) -> np.ndarray:
        return ordered_mean(self.path_lengths(X), axis=0)


def _fit_one_tree(X: np.ndarray, config: ForestConfig, psi: int, max_depth: int, dof: int, tree_index: int) -> IsolationTree:
    rng = make_rng(derive_seed(config.seed, tree_index))
    rows = rng.choice(X.shape[0], size=psi, replace=False)
    return build_tree(X[rows], config.model, max_depth, dof, config.eta, rng)


def fit(ds, config: ForestConfig, max_concurrent: Optional[int] = None) -> Forest:
    """
    Fit an isolation forest on a Dataset (or a raw n x p matrix).

    Args:
        ds: Training data
        config: Forest configuration
        max_concurrent: Worker threads for tree fitting (defaults to settings)

    Returns:
        Forest: Fitted ensemble; identical for any thread count
    """
    if isinstance(ds, Dataset):
        X = ds.features
        fingerprint = ds.fingerprint()
        name = ds.name
    else:
        X = np.asarray(ds, dtype=np.float64)
        if X.ndim != 2:
            raise ForestError(f"Training data must be a 2-D matrix, got shape {X.shape}")
        fingerprint = Dataset("matrix", X, [str(i) for i in range(X.shape[1])]).fingerprint()
        name = "matrix"

    n, p = X.shape
    if n < 2:
        raise ForestError(f"Need at least 2 training rows, got {n}")
    psi = min(config.subsample, n)
    dof = config.resolved_dof(p)
    max_depth = config.resolved_max_depth(psi)

    logger.info("=" * 50)
    logger.info(f"Fitting {config.model} on '{name}': n={n}, p={p}, trees={config.n_trees}, psi={psi}, max_depth={max_depth}")

    trees = run_parallel(
        lambda t: _fit_one_tree(X, config, psi, max_depth, dof, t),
        range(config.n_trees),
        max_concurrent,
    )

    logger.info(f"Fitted {len(trees)} trees")
    logger.info("=" * 50)
    return Forest(config=config, trees=trees, n_features=p, psi=psi, max_depth=max_depth, fitted_on=fingerprint)


# ==============================================================================
# Scoring
# ==============================================================================
def anomaly_scores(forest: Forest, X) -> np.ndarray:
    """Scores 2^(-E[h(x)] / c(psi)) for every row of X (or a Dataset)."""
    if isinstance(X, Dataset):
        X = X.features
    mean_depth = forest.mean_depths(X)
    return np.power(2.0, -mean_depth / c_factor(forest.psi))


def anomaly_score(forest: Forest, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ForestError(f"anomaly_score takes a single point, got shape {x.shape}")
    return float(anomaly_scores(forest, x.reshape(1, -1))[0])


def top_k_count(contamination: float, n: int) -> int:
    """round(contamination * n) with halves rounded up."""
    if not (0.0 < contamination < 1.0):
        raise ConfigError(f"contamination must be in (0, 1), got {contamination}")
    return int(math.floor(contamination * n + 0.5))


def labels_from_scores(scores: np.ndarray, contamination: float) -> np.ndarray:
    """Flag the top round(c * n) scores; equal scores resolve by lower row index."""
    scores = np.asarray(scores, dtype=np.float64)
    k = top_k_count(contamination, scores.shape[0])
    labels = np.zeros(scores.shape[0], dtype=np.int64)
    order = np.argsort(-scores, kind="stable")
    labels[order[:k]] = 1
    return labels


def predict_labels(forest: Forest, ds, contamination: float) -> np.ndarray:
    return labels_from_scores(anomaly_scores(forest, ds), contamination)
