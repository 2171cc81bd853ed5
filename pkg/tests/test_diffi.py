
import numpy as np
import pytest

from conftest import make_forest, single_split
from isolation_xai.errors import ExplainError
from isolation_xai.explain import diffi_gfi, diffi_importances, diffi_node_lambda
from isolation_xai.forest import ForestConfig, InternalNode, LeafNode, SplitPlane, c_factor, fit


def _axis_node(n_left, n_right, feature=0, p=2):
    normal = np.zeros(p)
    normal[feature] = 1.0
    return single_split(normal, 0.0, n_left, n_right)


class TestNodeImbalance:

    def test_strong_imbalance(self):
        assert diffi_node_lambda(_axis_node(9, 1)) == pytest.approx(1.0)

    def test_even_split(self):
        assert diffi_node_lambda(_axis_node(5, 5)) == pytest.approx(0.5)

    def test_empty_side(self):
        assert diffi_node_lambda(_axis_node(0, 10)) == 0.0
        assert diffi_node_lambda(_axis_node(4, 0)) == 0.0

    def test_two_points(self):
        assert diffi_node_lambda(_axis_node(1, 1)) == 0.5

    def test_range(self):
        for n_left in range(1, 20):
            value = diffi_node_lambda(_axis_node(n_left, 20 - n_left))
            assert 0.5 <= value <= 1.0

    def test_oblique_node(self):
        node = single_split([0.6, 0.8], 0.0, 3, 3)
        with pytest.raises(ExplainError, match="axis-aligned"):
            diffi_node_lambda(node)


class TestDiffiGfi:

    def test_rejects_oblique_forests(self, small_dataset):
        forest = fit(small_dataset, ForestConfig(model="EIF", n_trees=3, subsample=32, seed=0))
        with pytest.raises(ExplainError, match="IF forests only"):
            diffi_gfi(forest, small_dataset, 0.1)

    def test_single_feature_forest(self, feature3_only):
        forest = fit(feature3_only, ForestConfig(model="IF", n_trees=10, subsample=32, seed=2))
        gfi = diffi_gfi(forest, feature3_only, contamination=0.1)
        np.testing.assert_array_equal(gfi[:3], 0.0)
        assert gfi[3] > 0

    def test_hand_built_tree(self):
        """Four points, root on feature 0 (3 | 1), then feature 1 on the big side (2 | 1)."""
        inner = InternalNode(
            plane=SplitPlane(np.array([0.0, 1.0]), 0.0),
            size=3, left_size=2, right_size=1, depth=1,
            left=LeafNode(2, 2), right=LeafNode(1, 2),
        )
        root = InternalNode(
            plane=SplitPlane(np.array([1.0, 0.0]), 0.0),
            size=4, left_size=3, right_size=1, depth=0,
            left=inner, right=LeafNode(1, 1),
        )
        forest = make_forest([root], n_features=2, psi=4, model="IF")
        X = np.array([[1.0, 1.0], [1.0, 2.0], [1.0, -1.0], [-1.0, 0.0]])

        lam_root = diffi_node_lambda(root)
        lam_inner = diffi_node_lambda(inner)
        assert lam_root == pytest.approx(1.0)
        assert lam_inner == 0.5
        deep = 2 + c_factor(2)
        I, V = diffi_importances(forest, X)
        np.testing.assert_allclose(I[0], [lam_root / deep, lam_inner / deep])
        np.testing.assert_allclose(I[2], [lam_root / 2.0, lam_inner / 2.0])
        np.testing.assert_allclose(I[3], [lam_root / 1.0, 0.0])
        np.testing.assert_array_equal(V[3], [1.0, 0.0])

        # contamination 0.25 flags the shallowest point, row 3
        gfi = diffi_gfi(forest, X, 0.25)
        inlier_part = np.array([
            (lam_root / deep * 2 + lam_root / 2.0) / 3,
            (lam_inner / deep * 2 + lam_inner / 2.0) / 3,
        ])
        outlier_part = np.array([lam_root, 0.0])
        np.testing.assert_allclose(gfi, outlier_part / inlier_part)
