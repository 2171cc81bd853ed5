import copy

import numpy as np
import pytest

from conftest import make_forest, single_split
from isolation_xai.errors import ExplainError, ForestError
from isolation_xai.explain import exiffi_gfi, exiffi_importances, exiffi_lfi, exiffi_point, node_lambda
from isolation_xai.forest import ForestConfig, InternalNode, LeafNode, SplitPlane, fit


class TestNodeLambda:

    def test_worked_example(self):
        """x projects to 3.65 > 2.95, landing on the 10-point side of a 100-point node."""
        node = InternalNode(
            plane=SplitPlane(np.array([0.5, 0.7, 0.2]), 2.95),
            size=100,
            left_size=10,
            right_size=90,
            depth=0,
            left=LeafNode(10, 1),
            right=LeafNode(90, 1),
        )
        x = np.array([2.5, 3.0, 1.5])
        np.testing.assert_allclose(node_lambda(node, x), [5.0, 7.0, 2.0], rtol=0, atol=1e-12)

    def test_one_hot_normal(self):
        node = single_split([1.0, 0.0, 0.0], 0.5, left_size=1, right_size=1)
        np.testing.assert_array_equal(node_lambda(node, np.array([1.0, 0.0, 0.0])), [2.0, 0.0, 0.0])

    def test_empty_side_counts_as_one_point(self):
        v = np.array([0.6, 0.8])
        node = single_split(v, 100.0, left_size=0, right_size=7)
        far = np.array([200.0, 200.0])
        np.testing.assert_allclose(node_lambda(node, far), 7 * v)

    def test_components_at_least_abs_normal(self):
        v = np.array([-0.48, 0.6, 0.64])
        node = single_split(v, 0.0, left_size=3, right_size=5)
        for x in np.random.default_rng(0).standard_normal((20, 3)):
            assert np.all(node_lambda(node, x) >= np.abs(v))


class TestPointImportance:

    def test_single_node_path(self):
        forest = make_forest([single_split([1.0, 0.0], 0.5, 1, 1)], n_features=2, psi=2)
        I, V = exiffi_point(forest, np.array([1.0, 0.0]))
        np.testing.assert_array_equal(I, [2.0, 0.0])
        np.testing.assert_array_equal(V, [1.0, 0.0])
        np.testing.assert_array_equal(exiffi_lfi(forest, np.array([1.0, 0.0])), [2.0, 0.0])

    def test_identical_trees_add_up(self):
        root = single_split([0.6, 0.8], 0.1, 2, 6)
        one = make_forest([root], n_features=2, psi=8)
        two = make_forest([root, copy.deepcopy(root)], n_features=2, psi=8)
        x = np.array([1.0, 1.0])
        I1, V1 = exiffi_point(one, x)
        I2, V2 = exiffi_point(two, x)
        np.testing.assert_array_equal(I2, 2 * I1)
        np.testing.assert_array_equal(V2, 2 * V1)

    def test_proportional_importance_gives_constant_lfi(self):
        forest = make_forest([single_split([0.6, 0.8], 0.0, 2, 6)], n_features=2, psi=8)
        np.testing.assert_allclose(exiffi_lfi(forest, np.array([1.0, 1.0])), [4.0, 4.0])

    def test_two_level_tree_by_hand(self):
        inner = InternalNode(
            plane=SplitPlane(np.array([0.0, 1.0]), 0.0),
            size=4, left_size=1, right_size=3, depth=1,
            left=LeafNode(1, 2), right=LeafNode(3, 2),
        )
        root = InternalNode(
            plane=SplitPlane(np.array([1.0, 0.0]), 0.0),
            size=6, left_size=4, right_size=2, depth=0,
            left=inner, right=LeafNode(2, 1),
        )
        forest = make_forest([root], n_features=2, psi=6)
        I, V = exiffi_point(forest, np.array([1.0, 1.0]))
        np.testing.assert_allclose(I, [6 / 4, 4 / 1])
        np.testing.assert_array_equal(V, [1.0, 1.0])

    def test_signed_normals(self):
        forest = make_forest([single_split([-0.6, 0.8], 0.0, 2, 6)], n_features=2, psi=8)
        _, V_abs = exiffi_point(forest, np.array([0.0, 1.0]), signed=False)
        _, V_signed = exiffi_point(forest, np.array([0.0, 1.0]), signed=True)
        np.testing.assert_allclose(V_abs, [0.6, 0.8])
        np.testing.assert_allclose(V_signed, [-0.6, 0.8])

    def test_dimension_mismatch(self):
        forest = make_forest([single_split([1.0, 0.0], 0.5, 1, 1)], n_features=2, psi=2)
        with pytest.raises(ForestError):
            exiffi_point(forest, np.zeros(3))


class TestGlobalImportance:

    def test_single_feature_forest(self, feature3_only):
        forest = fit(feature3_only, ForestConfig(model="IF", n_trees=10, subsample=32, seed=1))
        gfi = exiffi_gfi(forest, feature3_only, contamination=0.1)
        # splits on a constant column send every row to one side: ratio 1 for both classes
        assert set(gfi[:3].tolist()) <= {0.0, 1.0}
        assert gfi[3] > gfi[:3].max()

    def test_empty_outlier_class(self, feature3_only):
        forest = fit(feature3_only, ForestConfig(model="EIF", n_trees=5, subsample=32, seed=1))
        with pytest.raises(ExplainError, match="empty"):
            exiffi_gfi(forest, feature3_only, contamination=0.01)

    def test_if_importance_sits_on_the_split_feature(self, small_dataset):
        forest = fit(small_dataset, ForestConfig(model="IF", n_trees=5, subsample=32, seed=2))
        for tree in forest.trees:
            for node in tree.internal_nodes():
                lam = node_lambda(node, small_dataset.features[0])
                others = np.delete(lam, node.plane.split_feature)
                assert others.sum() == 0.0

    def test_tree_order_does_not_matter(self, small_dataset, small_config):
        forest = fit(small_dataset, small_config)
        reordered = copy.copy(forest)
        reordered.trees = list(reversed(forest.trees))
        I1, V1 = exiffi_importances(forest, small_dataset)
        I2, V2 = exiffi_importances(reordered, small_dataset)
        np.testing.assert_array_equal(I1, I2)
        np.testing.assert_array_equal(V1, V2)
        np.testing.assert_array_equal(exiffi_gfi(forest, small_dataset, 0.1), exiffi_gfi(reordered, small_dataset, 0.1))

    def test_scaling_node_ratios(self, small_dataset, small_config):
        forest = fit(small_dataset, small_config)
        scaled = copy.deepcopy(forest)
        for tree in scaled.trees:
            for node in tree.internal_nodes():
                node.size *= 3
        X = small_dataset.features[:30]
        I, V = exiffi_importances(forest, X)
        I3, V3 = exiffi_importances(scaled, X)
        np.testing.assert_allclose(I3, 3 * I, rtol=1e-12)
        np.testing.assert_array_equal(V3, V)
        lfi = np.divide(I, V, out=np.zeros_like(I), where=V != 0)
        lfi3 = np.divide(I3, V3, out=np.zeros_like(I3), where=V3 != 0)
        np.testing.assert_array_equal(lfi.argmax(axis=1), lfi3.argmax(axis=1))
