"""
Compiled numeric kernels
"""

import numba
import numpy as np


@numba.njit(cache=False)
def compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """Prefix sums with Neumaier error compensation.

    Each output element carries the running total plus the recovered
    round-off, so long tables keep close to correctly rounded sums.
    """
    out = np.empty_like(values)
    total = 0.0
    compensation = 0.0
    for i in range(values.shape[0]):
        x = values[i]
        t = total + x
        if abs(total) >= abs(x):
            compensation += (total - t) + x
        else:
            compensation += (x - t) + total
        total = t
        out[i] = total + compensation
    return out
