from .depth_profile import depth_profile
from .diffi import diffi_gfi, diffi_importances, diffi_node_lambda
from .exiffi import (
    exiffi_gfi,
    exiffi_importances,
    exiffi_lfi,
    exiffi_lfi_matrix,
    exiffi_point,
    node_lambda,
)
from .gfi_report import (
    EXPLAINER_EXIFFI,
    EXPLAINERS,
    GfiReport,
    compute_gfi,
    gfi_over_runs,
    gfi_ranking,
    parse_explainer,
    report_from_runs,
)
from .scoremap import ScoremapGrid, complete_scoremap, scoremap_grid
