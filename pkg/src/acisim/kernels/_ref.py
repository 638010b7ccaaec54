"""Pure numpy implementation of the counting kernel.

Used whenever the compiled extension is unavailable (or explicitly disabled
via ACISIM_KERNELS=python).
"""

from __future__ import annotations

import numpy as np


def joint_counts(codes: np.ndarray, cols: np.ndarray, cards: np.ndarray) -> np.ndarray:
    """Count occurrences of every joint state of the selected columns.

    Parameters
    ----------
    codes : int64 array, shape (n_rows, n_vars)
        State indices per row.
    cols : int64 array, shape (k,)
        Column indices to count over, in order.
    cards : int64 array, shape (k,)
        Cardinality of each selected column.

    Returns
    -------
    int64 array, shape (prod(cards),)
        Counts in row-major order over the selected columns.
    """
    size = int(np.prod(cards)) if len(cards) else 1
    if codes.shape[0] == 0:
        return np.zeros(size, dtype=np.int64)
    if len(cols) == 0:
        return np.array([codes.shape[0]], dtype=np.int64)
    flat = np.ravel_multi_index(tuple(codes[:, c] for c in cols), tuple(cards))
    return np.bincount(flat, minlength=size).astype(np.int64)
