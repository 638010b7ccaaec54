"""Decomposable log-likelihood and the penalized structure score.

The structure score is the data log-likelihood minus a complexity penalty of
0.5*ln(n_rows) plus the graph size (node count + edge count). Natural
logarithms throughout.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from acisim.bayes.types import Dag, DiscreteBatch
from acisim.errors import EmptyBatchError
from acisim.kernels import joint_counts

__all__ = ["family_counts", "family_log_likelihood", "log_likelihood", "score_bic"]


def family_counts(
    data: DiscreteBatch, child: str, parents: Sequence[str]
) -> np.ndarray:
    """Contingency counts for one node family.

    Returns an int64 array of shape (prod(parent cards), child card); parent
    combinations are enumerated row-major in the given parent order.
    """
    cols = [data.column_index(p) for p in parents] + [data.column_index(child)]
    cards = [data.schema[c].cardinality for c in cols]
    flat = joint_counts(
        data.codes,
        np.asarray(cols, dtype=np.int64),
        np.asarray(cards, dtype=np.int64),
    )
    return flat.reshape(-1, cards[-1])


def family_log_likelihood(
    data: DiscreteBatch, child: str, parents: Sequence[str]
) -> float:
    """Sum over rows of ln P_hat(child | parents) with P_hat the empirical
    conditional frequency. Zero-count cells contribute nothing (they are never
    observed)."""
    counts = family_counts(data, child, parents)
    totals = counts.sum(axis=1, keepdims=True)
    mask = counts > 0
    # counts/totals is safe under the mask: a positive cell implies a positive row total.
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(mask, counts / np.where(totals > 0, totals, 1), 1.0)
    return float(np.sum(counts[mask] * np.log(ratios[mask])))


def log_likelihood(dag: Dag, data: DiscreteBatch) -> float:
    """Log-likelihood of the batch under empirical (MLE) parameters for
    ``dag``, decomposed over node families."""
    if data.n_rows == 0:
        raise EmptyBatchError("empty batch")
    return sum(
        family_log_likelihood(data, node, dag.parents(node)) for node in dag.nodes
    )


def score_bic(dag: Dag, data: DiscreteBatch) -> float:
    """Penalized structure score: log-likelihood minus
    (0.5*ln(n_rows) + n_nodes + n_edges)."""
    if data.n_rows == 0:
        raise EmptyBatchError("empty batch")
    penalty = 0.5 * math.log(data.n_rows) + len(dag.nodes) + len(dag.edges)
    return log_likelihood(dag, data) - penalty
