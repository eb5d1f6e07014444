"""
Jain's fairness index.
"""

from typing import Optional, Sequence

import numpy as np


def jain_index(counts: Sequence[float]) -> Optional[float]:
    """
    (sum x)^2 / (n * sum x^2).

    Returns:
        Index in [1/n, 1], or None when every count is zero (undefined)
    """
    x = np.asarray(counts, dtype=float)
    if x.size == 0:
        raise ValueError("jain_index needs at least one value")
    total = x.sum()
    if total == 0:
        return None
    return float(total * total / (x.size * np.square(x).sum()))
