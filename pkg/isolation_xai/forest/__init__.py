from .forest import (
    Forest,
    ForestConfig,
    anomaly_score,
    anomaly_scores,
    fit,
    labels_from_scores,
    parse_model,
    predict_labels,
    top_k_count,
)
from .model_io import load_model, save_model
from .tree import (
    MODEL_EIF,
    MODEL_EIF_PLUS,
    MODEL_IF,
    MODELS,
    InternalNode,
    IsolationTree,
    LeafNode,
    SplitPlane,
    c_factor,
    depth_h,
    sample_intercept,
    sample_normal_vector,
)
