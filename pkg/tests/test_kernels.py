"""Counting kernel: fallback and compiled backend agree."""

import numpy as np
import pytest

import acisim.kernels as kernels
from acisim.kernels import _ref


def random_case(seed):
    rng = np.random.default_rng(seed)
    n_vars = int(rng.integers(1, 6))
    cards = rng.integers(2, 5, size=n_vars).astype(np.int64)
    n_rows = int(rng.integers(0, 200))
    codes = np.ascontiguousarray(
        np.column_stack([rng.integers(0, c, size=n_rows) for c in cards]).astype(np.int64)
        if n_rows
        else np.zeros((0, n_vars), dtype=np.int64)
    )
    k = int(rng.integers(1, n_vars + 1))
    cols = rng.choice(n_vars, size=k, replace=False).astype(np.int64)
    return codes, cols, cards[cols]


def test_ref_counts_sum_to_rows():
    codes, cols, cards = random_case(1)
    out = _ref.joint_counts(codes, cols, cards)
    assert out.sum() == codes.shape[0]
    assert out.shape == (int(np.prod(cards)),)


def test_ref_known_small_case():
    codes = np.array([[0, 1], [1, 0], [1, 1], [1, 1]], dtype=np.int64)
    out = _ref.joint_counts(codes, np.array([0, 1], dtype=np.int64), np.array([2, 2], dtype=np.int64))
    # row-major over (col0, col1): (0,0)=0 (0,1)=1 (1,0)=1 (1,1)=2
    assert out.tolist() == [0, 1, 1, 2]


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled backend unavailable")
def test_backends_agree():
    from acisim.kernels import _fast

    for seed in range(50):
        codes, cols, cards = random_case(seed)
        np.testing.assert_array_equal(
            _fast.joint_counts(codes, cols, cards),
            _ref.joint_counts(codes, cols, cards),
        )


def test_backend_reported():
    assert kernels.BACKEND in {"cython", "python"}
    assert callable(kernels.joint_counts)
