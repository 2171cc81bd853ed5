import os
import hashlib
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from ..errors import DatasetError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Numeric feature matrix with optional binary anomaly labels.

    Attributes:
        name: Dataset name (preset id or file stem)
        features: n x p float64 matrix
        feature_names: p column names
        labels: Optional n flags, 0 = inlier, 1 = outlier
    """
    name: str
    features: np.ndarray
    feature_names: List[str]
    labels: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise DatasetError(f"Dataset '{self.name}': features must be a 2-D matrix, got {features.ndim} dimensions")
        n, p = features.shape
        if n < 1 or p < 1:
            raise DatasetError(f"Dataset '{self.name}': needs at least one row and one column, got {n}x{p}")
        if not np.all(np.isfinite(features)):
            row, col = np.argwhere(~np.isfinite(features))[0]
            raise DatasetError(f"Dataset '{self.name}': non-finite value at row {row}, column {col}")
        if len(self.feature_names) != p:
            raise DatasetError(f"Dataset '{self.name}': {len(self.feature_names)} feature names for {p} columns")

        labels = self.labels
        if labels is not None:
            labels = np.asarray(labels)
            if labels.shape != (n,):
                raise DatasetError(f"Dataset '{self.name}': {labels.size} labels for {n} rows")
            if not np.all(np.isin(labels, (0, 1))):
                raise DatasetError(f"Dataset '{self.name}': labels must be 0 or 1")
            labels = labels.astype(np.int64)

        # frozen dataclass, so normalised arrays go in through object.__setattr__
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "feature_names", [str(name) for name in self.feature_names])
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def has_labels(self) -> bool:
        return self.labels is not None

    @property
    def contamination(self) -> Optional[float]:
        """Fraction of rows labeled 1, or None for unlabeled data."""
        if self.labels is None:
            return None
        return float(self.labels.sum()) / self.n

    def fingerprint(self) -> str:
        """SHA-256 of the feature matrix bytes and shape."""
        digest = hashlib.sha256()
        digest.update(np.asarray(self.features.shape, dtype=np.int64).tobytes())
        digest.update(np.ascontiguousarray(self.features).tobytes())
        return digest.hexdigest()

    def subset(self, rows: Sequence[int], name: Optional[str] = None) -> 'Dataset':
        rows = np.asarray(rows, dtype=np.int64)
        labels = None if self.labels is None else self.labels[rows]
        return Dataset(name or self.name, self.features[rows], list(self.feature_names), labels)

    def select_features(self, columns: Sequence[int]) -> 'Dataset':
        columns = [int(c) for c in columns]
        for c in columns:
            if c < 0 or c >= self.p:
                raise DatasetError(f"Feature index {c} out of range for p={self.p}")
        names = [self.feature_names[c] for c in columns]
        return Dataset(self.name, self.features[:, columns], names, self.labels)


def _parse_cell(text: str) -> float:
    # correctly rounded; NaN marks a bad cell
    try:
        return float(text)
    except ValueError:
        return np.nan


def load_csv(path: str, label_column: Optional[str] = None, name: Optional[str] = None,
             require_label: bool = True) -> Dataset:
    """
    Load a dataset from a comma-separated file with a header row.

    Args:
        path: CSV file path
        label_column: Column holding 0/1 labels; when None every column is a feature
        name: Dataset name (defaults to the file stem)
        require_label: When False, a missing label column means unlabeled data

    Returns:
        Dataset: Parsed dataset with column order preserved

    Raises:
        DatasetError: Missing file, ragged rows, non-numeric cells or bad labels
    """
    if not os.path.isfile(path):
        raise DatasetError(f"Dataset file not found: {path}")

    dataset_name = name or os.path.splitext(os.path.basename(path))[0]

    try:
        # Read everything as text first so bad cells can be reported by position
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8-sig")
    except pd.errors.ParserError as e:
        raise DatasetError(f"Ragged rows in {path}: {e}") from e
    except pd.errors.EmptyDataError as e:
        raise DatasetError(f"Empty dataset file: {path}") from e
    except UnicodeDecodeError as e:
        raise DatasetError(f"Dataset file is not valid UTF-8: {path}") from e

    if frame.shape[0] == 0:
        raise DatasetError(f"Dataset file has a header but no rows: {path}")

    # Rows with missing trailing fields come back as NaN; empty cells stay ""
    short_rows = frame.isna().any(axis=1).to_numpy()
    if short_rows.any():
        row = int(np.argmax(short_rows))
        raise DatasetError(f"Ragged rows in {path}: data row {row + 1} has fewer than {frame.shape[1]} fields")

    columns = [str(c) for c in frame.columns]
    if label_column is not None and label_column not in columns and not require_label:
        logger.info(f"No '{label_column}' column in {path}, loading without labels")
        label_column = None
    if label_column is not None and label_column not in columns:
        raise DatasetError(f"Label column '{label_column}' not found in {path} (columns: {', '.join(columns)})")

    numeric = frame.apply(lambda col: col.map(_parse_cell)).astype(np.float64)
    bad_cells = numeric.isna().to_numpy()
    if bad_cells.any():
        row, col = np.argwhere(bad_cells)[0]
        value = frame.iat[row, col]
        raise DatasetError(f"Non-numeric cell {value!r} at data row {row + 1}, column '{columns[col]}' in {path}")

    labels = None
    feature_columns = columns
    if label_column is not None:
        raw_labels = numeric[label_column].to_numpy(dtype=np.float64)
        bad = ~np.isin(raw_labels, (0.0, 1.0))
        if bad.any():
            row = int(np.argmax(bad))
            raise DatasetError(f"Label value {frame[label_column].iat[row]!r} at data row {row + 1} is not 0 or 1")
        labels = raw_labels.astype(np.int64)
        feature_columns = [c for c in columns if c != label_column]

    if not feature_columns:
        raise DatasetError(f"Dataset file has no feature columns: {path}")

    features = numeric[feature_columns].to_numpy(dtype=np.float64)
    logger.info(f"Loaded dataset '{dataset_name}' from {path}: n={features.shape[0]}, p={features.shape[1]}")
    return Dataset(dataset_name, features, feature_columns, labels)


def write_csv(ds: Dataset, path: str, label_column: str = "label") -> None:
    """Write a dataset with a header row; labels (if any) go last."""
    frame = pd.DataFrame(ds.features, columns=ds.feature_names)
    if ds.labels is not None:
        frame[label_column] = ds.labels
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    # repr-precision floats keep the file a bit-exact copy of the matrix
    frame.to_csv(path, index=False, float_format=None, lineterminator="\n")
    logger.info(f"Wrote dataset '{ds.name}' to {path}")
