import numpy as np


def ordered_sum(values: np.ndarray, axis: int = 0) -> np.ndarray:
    """Sum along ``axis`` independently of the order of the summands.

    Values are sorted along the axis before numpy's pairwise summation, so any
    permutation of the inputs (trees of a forest, rows of a dataset) gives a
    bit-identical result.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape[axis] == 0:
        return np.sum(values, axis=axis)
    return np.sort(values, axis=axis).sum(axis=axis)


def ordered_mean(values: np.ndarray, axis: int = 0) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    return ordered_sum(values, axis=axis) / values.shape[axis]


def safe_divide(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    """Componentwise quotient where a zero denominator yields 0."""
    numerator = np.asarray(numerator, dtype=np.float64)
    denominator = np.asarray(denominator, dtype=np.float64)
    out = np.zeros(np.broadcast(numerator, denominator).shape, dtype=np.float64)
    np.divide(numerator, denominator, out=out, where=denominator != 0)
    return out
