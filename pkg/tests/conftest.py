import os
import sys

import numpy as np
import pytest

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), os.pardir))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from isolation_xai.data import Dataset, SyntheticSpec, generate_dataset
from isolation_xai.forest import Forest, ForestConfig, InternalNode, IsolationTree, LeafNode, SplitPlane


def make_forest(roots, n_features, psi, model="EIF", max_depth=3):
    """Wrap hand-built tree roots into a Forest."""
    trees = [IsolationTree(root=root, psi=psi) for root in roots]
    config = ForestConfig(model=model, n_trees=len(trees), subsample=max(psi, 2), max_depth=max_depth)
    return Forest(config=config, trees=trees, n_features=n_features, psi=psi, max_depth=max_depth)


def single_split(normal, intercept, left_size, right_size, depth=0):
    """One internal node with two leaves."""
    size = left_size + right_size
    return InternalNode(
        plane=SplitPlane(np.asarray(normal, dtype=np.float64), intercept),
        size=size,
        left_size=left_size,
        right_size=right_size,
        depth=depth,
        left=LeafNode(size=left_size, depth=depth + 1),
        right=LeafNode(size=right_size, depth=depth + 1),
    )


@pytest.fixture
def small_dataset():
    """3-feature labeled set: 200 inliers in a ball, 20 outliers along feature 0."""
    synth = SyntheticSpec(n_inliers=200, n_outliers=20, p=3, r=3.0, d=4.0, u_raw=(1.0, 0.0, 0.0), seed=11)
    return generate_dataset(synth, name="small")


@pytest.fixture
def small_config():
    return ForestConfig(model="EIF+", n_trees=20, subsample=64, seed=5)


@pytest.fixture
def feature3_only():
    """Rows that vary on feature 3 only; features 0-2 are constant zero."""
    rng = np.random.default_rng(3)
    X = np.zeros((40, 4))
    X[:, 3] = rng.standard_normal(40)
    X[:4, 3] += 6.0
    labels = np.zeros(40, dtype=np.int64)
    labels[:4] = 1
    return Dataset("feature3", X, [f"feature_{i}" for i in range(4)], labels)


class ZeroRng:
    """Generator stand-in whose draws are all zero (or a fixed uniform value)."""

    def __init__(self, uniform_value=0.0):
        self.uniform_value = uniform_value

    def uniform(self, low=0.0, high=1.0, size=None):
        return np.full(size, self.uniform_value, dtype=np.float64)

    def standard_normal(self, size=None):
        return np.zeros(size, dtype=np.float64)


class TapRng:
    """Deterministic tap: fixed component choice, unit positive normal draws, midpoint intercepts."""

    def __init__(self, component):
        self.component = component

    def choice(self, n, size=None, replace=True):
        return np.asarray([self.component % n] * size, dtype=np.int64)

    def standard_normal(self, size=None):
        return np.ones(size, dtype=np.float64)

    def uniform(self, low=0.0, high=1.0, size=None):
        return (low + high) / 2.0
