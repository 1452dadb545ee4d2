"""
Summary statistics for residual sweeps, fits and Monte-Carlo estimates.

Sums go through math.fsum, which is exactly rounded: results do not depend on
element order, chunking or thread count.
"""
import math
from typing import Sequence, TypeVar

import numpy as np
from numpy.typing import ArrayLike


T = TypeVar("T")

# Rows kept in per-node sample tables
SAMPLE_CAP = 10_000


def stable_sum(values: ArrayLike) -> float:
    return math.fsum(np.ravel(np.asarray(values, dtype=float)).tolist())


def rms(values: ArrayLike) -> float:
    """Root mean square; 0 for an empty input."""
    flat = np.ravel(np.asarray(values, dtype=float))
    if flat.size == 0:
        return 0.0
    return math.sqrt(stable_sum(flat * flat) / flat.size)


def max_abs(values: ArrayLike) -> float:
    flat = np.ravel(np.asarray(values, dtype=float))
    return float(np.max(np.abs(flat))) if flat.size else 0.0


def rms_and_max(values: ArrayLike) -> tuple[float, float]:
    """(rms, max |v|) with rms clamped so that rms <= max holds after rounding."""
    peak = max_abs(values)
    return min(rms(values), peak), peak


def mean_std_err(values: ArrayLike) -> tuple[float, float]:
    """
    Sample mean and its standard error.

    Returns:
        (mean, std_err); std_err is 0 for a single value
    """
    flat = np.ravel(np.asarray(values, dtype=float))
    n = flat.size
    if n == 0:
        raise ValueError("mean_std_err needs at least one value")
    mean = stable_sum(flat) / n
    if n == 1:
        return mean, 0.0
    dev = flat - mean
    var = stable_sum(dev * dev) / (n - 1)
    return mean, math.sqrt(var / n)


def subsample(rows: Sequence[T], cap: int = SAMPLE_CAP) -> list[T]:
    """Every k-th row so that at most `cap` rows remain."""
    if len(rows) <= cap:
        return list(rows)
    stride = math.ceil(len(rows) / cap)
    return list(rows[::stride])
