from .correlation import lfi_score_correlation
from .feature_selection import FeatureSelectionCurve, curves_auc_fs, feature_selection_curves
from .metrics import (
    auc_fs,
    average_precision,
    detection_report,
    ndcg,
    pearson,
    precision_at_contamination,
    roc_auc,
)
from .report import EvaluationReport
from .sweeps import (
    TABLE_COLUMNS,
    auc_fs_evaluation,
    contamination_sweep,
    correlation_evaluation,
    detection_sweep,
    eta_sweep,
    ndcg_evaluation,
    summarise,
    timing_benchmark,
)
