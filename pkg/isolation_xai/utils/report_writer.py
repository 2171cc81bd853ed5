import os
import json
import logging
from typing import Any

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


def _to_jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_jsonable(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def write_json(data: Any, path: str) -> None:
    """Write JSON with sorted keys so reruns produce identical bytes."""
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(_to_jsonable(data), f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    logger.info(f"Wrote {path}")


def write_table(frame: pd.DataFrame, base_path: str) -> None:
    """Write a table as ``<base_path>.csv`` and ``<base_path>.json`` (list of records)."""
    parent = os.path.dirname(base_path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    frame.to_csv(f"{base_path}.csv", index=False, lineterminator="\n")
    records = frame.astype(object).where(frame.notna(), None).to_dict(orient="records")
    write_json(records, f"{base_path}.json")
    logger.info(f"Wrote {base_path}.csv")
