"""Surprise of a metrics batch under the current model.

For each SLO variable the batch rows are scored by the model probability of
the observed state given the variable's Markov blanket, and the per-variable
log likelihoods are folded into a BIC-style penalty:

    bic(var) = -2 * sum_rows ln p(row) + card(var) * ln(n_rows)

The batch surprise is the sum over SLO variables present in both the model
and the batch. Probabilities are floored at ``PROB_FLOOR`` so a single
never-seen outcome cannot produce an infinite score.

Inference normally runs on the sub-network spanned by the union of the SLO
variables' blankets (plus the queried variable itself), which is what makes
the measure cheap on large models. ``use_blanket=False`` runs the same
queries against the full network instead; with conditionally independent SLO
variables both modes agree to floating point noise.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from ..bayes.inference import markov_blanket, variable_elimination
from ..bayes.model import BayesNet
from ..bayes.types import DiscreteBatch
from ..errors import (
    CardinalityMismatchError,
    EmptyBatchError,
    ImpossibleEvidenceError,
)

__all__ = ["PROB_FLOOR", "surprise"]

PROB_FLOOR = 1e-9


def _schema_order(model: BayesNet, names: Iterable[str]) -> list[str]:
    rank = {name: i for i, name in enumerate(model.node_names)}
    return sorted(names, key=rank.__getitem__)


def surprise(
    model: BayesNet,
    batch: DiscreteBatch,
    slo_vars: Sequence[str],
    *,
    use_blanket: bool = True,
    floor: float = PROB_FLOOR,
) -> float:
    """Summed per-SLO-variable BIC of ``batch`` under ``model``."""
    n = len(batch)
    if n == 0:
        raise EmptyBatchError("empty batch")

    batch_cols = {v.name: i for i, v in enumerate(batch.schema)}
    present = [
        v for v in slo_vars if model.has_variable(v) and v in batch_cols
    ]
    present = _schema_order(model, dict.fromkeys(present))
    if not present:
        return 0.0

    union_blanket = markov_blanket(model, present)
    log_n = math.log(n)
    total = 0.0

    for var in present:
        evidence_vars = [
            w for w in markov_blanket(model, [var]) if w in batch_cols
        ]
        if use_blanket:
            queried = set(union_blanket) | {var}
            evidence_vars = [w for w in evidence_vars if w in queried]
            order = _schema_order(model, queried - {var})
        else:
            order = None
        evidence_vars = _schema_order(model, evidence_vars)

        cols = [batch_cols[var]] + [batch_cols[w] for w in evidence_vars]
        sub = batch.codes[:, cols]
        rows, counts = np.unique(sub, axis=0, return_counts=True)

        log_lik = 0.0
        for row, count in zip(rows, counts):
            evidence = {}
            for w, code in zip(evidence_vars, row[1:]):
                evidence[w] = batch.schema[batch_cols[w]].states[code]
            state = batch.schema[batch_cols[var]].states[row[0]]
            try:
                dist = variable_elimination(
                    model, [var], evidence=evidence, order=order
                )
                p = float(dist.values[model.variable(var).index_of(state)])
            except (ImpossibleEvidenceError, CardinalityMismatchError):
                # States the model has never been told about score as
                # (floored) impossibilities rather than crashing the loop.
                p = 0.0
            log_lik += count * math.log(max(p, floor))

        k = model.cardinality(var)
        total += -2.0 * log_lik + k * log_n

    return total
