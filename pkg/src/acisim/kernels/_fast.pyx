# cython: boundscheck=False, wraparound=False, cdivision=True
"""Single-pass counting kernel.

Encodes each row's selected columns into one row-major joint index and
accumulates counts without materialising intermediate arrays.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def joint_counts(const cnp.int64_t[:, ::1] codes, const cnp.int64_t[:] cols, const cnp.int64_t[:] cards):
    """Same contract as acisim.kernels._ref.joint_counts."""
    cdef Py_ssize_t n = codes.shape[0]
    cdef Py_ssize_t k = cols.shape[0]
    cdef Py_ssize_t i, j
    cdef cnp.int64_t idx, size

    size = 1
    for j in range(k):
        size *= cards[j]

    out = np.zeros(size, dtype=np.int64)
    cdef cnp.int64_t[:] out_view = out

    if k == 0:
        out_view[0] = n
        return out

    strides = np.empty(k, dtype=np.int64)
    cdef cnp.int64_t[:] stride_view = strides
    stride_view[k - 1] = 1
    for j in range(k - 2, -1, -1):
        stride_view[j] = stride_view[j + 1] * cards[j + 1]

    for i in range(n):
        idx = 0
        for j in range(k):
            idx += codes[i, cols[j]] * stride_view[j]
        out_view[idx] += 1
    return out
