import os
import logging

import numpy as np
import pandas as pd

from ..errors import DatasetError

logger = logging.getLogger(__name__)


def validate_relevance(gains, p: int) -> np.ndarray:
    gains = np.asarray(gains, dtype=np.float64)
    if gains.shape != (p,):
        raise DatasetError(f"Relevance vector has {gains.size} entries, dataset has {p} features")
    if not np.all(np.isfinite(gains)) or np.any(gains < 0):
        raise DatasetError("Relevance gains must be finite and non-negative")
    if not np.any(gains > 0):
        raise DatasetError("Relevance vector needs at least one positive gain")
    return gains


def load_relevance_csv(path: str) -> np.ndarray:
    """
    Read ground-truth relevance gains, one row per feature in feature order.

    The file needs a header and a "relevance" column (other columns, such as a
    feature name, are ignored). A single-column file is read as-is.
    """
    if not os.path.isfile(path):
        raise DatasetError(f"Relevance file not found: {path}")
    try:
        frame = pd.read_csv(path, encoding="utf-8-sig")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DatasetError(f"Cannot parse relevance file {path}: {e}") from e

    if "relevance" in frame.columns:
        column = frame["relevance"]
    elif frame.shape[1] == 1:
        column = frame.iloc[:, 0]
    else:
        raise DatasetError(f"Relevance file {path} needs a 'relevance' column")

    values = pd.to_numeric(column, errors="coerce")
    if values.isna().any():
        row = int(np.argmax(values.isna().to_numpy()))
        raise DatasetError(f"Non-numeric relevance {column.iloc[row]!r} at data row {row + 1} in {path}")
    gains = values.to_numpy(dtype=np.float64)
    logger.info(f"Loaded relevance for {gains.size} features from {path}")
    return gains
