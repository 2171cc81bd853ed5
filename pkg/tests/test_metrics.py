import math

import numpy as np
import pytest

from isolation_xai.errors import MetricError
from isolation_xai.evaluation import (
    auc_fs,
    average_precision,
    detection_report,
    lfi_score_correlation,
    ndcg,
    pearson,
    precision_at_contamination,
    roc_auc,
)
from isolation_xai.forest import ForestConfig, fit


class TestAveragePrecision:

    def test_perfect_separation(self):
        assert average_precision([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_rank_walk(self):
        assert average_precision([0.9, 0.8, 0.1], [1, 0, 1]) == pytest.approx(0.8333333333)

    def test_ties_break_by_index(self):
        assert average_precision([0.5, 0.5], [1, 0]) == 1.0
        assert average_precision([0.5, 0.5], [0, 1]) == 0.5

    def test_needs_positive(self):
        with pytest.raises(MetricError):
            average_precision([0.1, 0.2], [0, 0])

    def test_shape_mismatch(self):
        with pytest.raises(MetricError):
            average_precision([0.1, 0.2, 0.3], [0, 1])


class TestRocAuc:

    def test_perfect_separation(self):
        assert roc_auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_pair_enumeration(self):
        assert roc_auc([0.9, 0.8, 0.1], [1, 0, 1]) == pytest.approx(0.5)

    def test_all_equal_scores(self):
        assert roc_auc([0.3, 0.3, 0.3, 0.3], [1, 0, 0, 1]) == pytest.approx(0.5)

    def test_single_class(self):
        with pytest.raises(MetricError):
            roc_auc([0.1, 0.2], [1, 1])


class TestPrecisionAtContamination:

    def test_top_k_all_outliers(self):
        assert precision_at_contamination([0.9, 0.8, 0.1, 0.2], [1, 1, 0, 0], 0.5) == 1.0

    def test_top_one_misses(self):
        scores = np.linspace(1.0, 0.1, 10)
        labels = np.zeros(10, dtype=int)
        labels[1] = 1
        assert precision_at_contamination(scores, labels, 0.1) == 0.0

    def test_zero_k(self):
        assert precision_at_contamination([0.9, 0.1], [1, 0], 0.1) == 0.0

    def test_bad_fraction(self):
        with pytest.raises(MetricError):
            precision_at_contamination([0.9, 0.1], [1, 0], 1.0)


class TestNdcg:

    def test_ideal_order(self):
        assert ndcg([0, 1, 2, 3, 4, 5], [1, 0, 0, 0, 0, 0]) == 1.0

    def test_relevant_feature_last(self):
        assert ndcg([1, 2, 3, 4, 5, 0], [1, 0, 0, 0, 0, 0]) == pytest.approx(1.0 / math.log2(7))

    def test_graded_relevance(self):
        assert ndcg([0, 1, 2, 5, 4, 3], [4, 3, 2, 0, 0, 0]) == pytest.approx(1.0)
        assert ndcg([1, 0, 2, 3, 4, 5], [4, 3, 2, 0, 0, 0]) < 1.0

    @pytest.mark.parametrize("ranking, relevance", [
        ([0, 0, 1], [1, 0, 0]),
        ([0, 1], [1, 0, 0]),
        ([0, 1, 2], [1, -1, 0]),
        ([0, 1, 2], [0, 0, 0]),
    ])
    def test_invalid_inputs(self, ranking, relevance):
        with pytest.raises(MetricError):
            ndcg(ranking, relevance)


class TestAucFs:

    def test_identical_curves(self):
        assert auc_fs([0.5, 0.4, 0.3], [0.5, 0.4, 0.3]) == 0.0

    def test_constant_curves(self):
        assert auc_fs(np.ones(6), np.zeros(6)) == pytest.approx(5.0)

    def test_single_step(self):
        assert auc_fs([0.7], [0.7]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(MetricError):
            auc_fs([1.0, 1.0], [1.0])


class TestCorrelation:

    def test_linear(self):
        x = np.arange(10, dtype=float)
        assert pearson(x, 2.0 * x) == pytest.approx(1.0)

    def test_constant_series(self):
        with pytest.raises(MetricError, match="constant"):
            pearson([1.0, 2.0, 3.0], [0.5, 0.5, 0.5])

    def test_too_short(self):
        with pytest.raises(MetricError):
            pearson([1.0, 2.0], [2.0, 1.0])

    def test_lfi_correlation_is_positive(self, small_dataset):
        forest = fit(small_dataset, ForestConfig(model="EIF+", n_trees=30, subsample=128, seed=2))
        assert lfi_score_correlation(forest, small_dataset) > 0.5


class TestDetectionReport:

    def test_keys_and_ranges(self, small_dataset, small_config):
        forest = fit(small_dataset, small_config)
        report = detection_report(forest, small_dataset)
        assert set(report) == {"avg_precision", "precision", "roc_auc"}
        for value in report.values():
            assert 0.0 <= value <= 1.0
        assert report["roc_auc"] > 0.9

    def test_needs_labels(self, small_dataset, small_config):
        forest = fit(small_dataset, small_config)
        unlabeled = small_dataset.__class__("u", small_dataset.features, small_dataset.feature_names)
        with pytest.raises(MetricError):
            detection_report(forest, unlabeled)
