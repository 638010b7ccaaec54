"""Structure search and parameter fitting.

``hill_climb`` is a first-improvement greedy search over single-edge
additions, scanning ordered node pairs in schema order and accepting any move
that strictly improves the penalized score. Edge removals and reversals exist
behind off-by-default flags. ``mle_fit`` fits CPTs by (optionally smoothed)
relative frequencies; ``parl_update`` blends an existing model with a batch;
``strl_update`` refits structure and parameters from batch plus backup data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from acisim.bayes.model import BayesNet, Cpt
from acisim.bayes.scoring import family_counts, family_log_likelihood
from acisim.bayes.types import Dag, DiscreteBatch
from acisim.errors import CardinalityMismatchError, EmptyBatchError

__all__ = ["StopCriterion", "hill_climb", "mle_fit", "parl_update", "strl_update"]


@dataclass(frozen=True)
class StopCriterion:
    """Search stops after a full pass with no accepted move, or after
    ``max_passes`` passes, whichever comes first."""

    max_passes: int | None = None


def hill_climb(
    data: DiscreteBatch,
    init: Dag | None = None,
    stop: StopCriterion | None = None,
    *,
    allow_removals: bool = False,
    allow_reversals: bool = False,
    accepted_scores: list[float] | None = None,
) -> Dag:
    """Greedy structure search maximizing the penalized score.

    Parameters
    ----------
    data : DiscreteBatch
        Observations; must be non-empty.
    init : Dag, optional
        Starting graph. Defaults to the empty graph over the batch schema.
    stop : StopCriterion, optional
    allow_removals, allow_reversals : bool
        Enable the extra move types. Off by default: the default move set is
        single-edge additions only.
    accepted_scores : list, optional
        If given, the score after every accepted move is appended (useful for
        asserting strict monotonicity).
    """
    if data.n_rows == 0:
        raise EmptyBatchError("empty batch")
    if stop is None:
        stop = StopCriterion()
    nodes = tuple(spec.name for spec in data.schema)
    dag = init if init is not None else Dag(nodes)
    if dag.nodes != nodes:
        raise ValueError("init graph nodes do not match the batch schema")

    fam_ll = {node: family_log_likelihood(data, node, dag.parents(node)) for node in nodes}
    penalty_base = 0.5 * math.log(data.n_rows) + len(nodes)
    score = sum(fam_ll.values()) - penalty_base - len(dag.edges)

    def family(node: str, parents: tuple[str, ...]) -> float:
        return family_log_likelihood(data, node, parents)

    passes = 0
    while stop.max_passes is None or passes < stop.max_passes:
        passes += 1
        improved = False
        for i in nodes:
            for j in nodes:
                if i == j:
                    continue
                if not dag.has_edge(i, j):
                    if dag.creates_cycle(i, j):
                        continue
                    candidate = dag.with_edge(i, j)
                    new_fam = family(j, candidate.parents(j))
                    delta = new_fam - fam_ll[j] - 1.0  # edge penalty
                    if delta > 0.0:
                        dag = candidate
                        fam_ll[j] = new_fam
                        score += delta
                        improved = True
                        if accepted_scores is not None:
                            accepted_scores.append(score)
                    continue
                # edge i -> j present
                if allow_removals:
                    candidate = dag.without_edge(i, j)
                    new_fam = family(j, candidate.parents(j))
                    delta = new_fam - fam_ll[j] + 1.0
                    if delta > 0.0:
                        dag = candidate
                        fam_ll[j] = new_fam
                        score += delta
                        improved = True
                        if accepted_scores is not None:
                            accepted_scores.append(score)
                        continue
                if allow_reversals and dag.has_edge(i, j):
                    removed = dag.without_edge(i, j)
                    if removed.creates_cycle(j, i):
                        continue
                    candidate = removed.with_edge(j, i)
                    new_j = family(j, candidate.parents(j))
                    new_i = family(i, candidate.parents(i))
                    delta = (new_j - fam_ll[j]) + (new_i - fam_ll[i])
                    if delta > 0.0:
                        dag = candidate
                        fam_ll[j] = new_j
                        fam_ll[i] = new_i
                        score += delta
                        improved = True
                        if accepted_scores is not None:
                            accepted_scores.append(score)
        if not improved:
            break
    return dag


def mle_fit(dag: Dag, data: DiscreteBatch, smoothing: float = 0.0) -> BayesNet:
    """Fit CPTs by relative frequency with additive smoothing.

    Each CPT entry is (count + smoothing) / (row_total + smoothing * card).
    With smoothing 0, parent combinations never observed get a uniform row.
    ``sample_weight`` of the result is the number of rows.
    """
    if data.n_rows == 0:
        raise EmptyBatchError("empty batch")
    if smoothing < 0:
        raise ValueError("smoothing must be >= 0")
    by_name = {spec.name: spec for spec in data.schema}
    if tuple(by_name) != dag.nodes:
        raise ValueError("dag nodes do not match the batch schema")
    cpts = {}
    for node in dag.nodes:
        parents = dag.parents(node)
        counts = family_counts(data, node, parents).astype(np.float64)
        card = by_name[node].cardinality
        totals = counts.sum(axis=1, keepdims=True)
        if smoothing > 0:
            table = (counts + smoothing) / (totals + smoothing * card)
        else:
            unseen = (totals == 0.0).ravel()
            totals = np.where(totals == 0.0, 1.0, totals)
            table = counts / totals
            table[unseen, :] = 1.0 / card
        shape = tuple(by_name[p].cardinality for p in parents) + (card,)
        cpts[node] = Cpt(node, parents, table.reshape(shape))
    return BayesNet(tuple(data.schema), dag, cpts, float(data.n_rows))


def _recode_to_model(model: BayesNet, batch: DiscreteBatch) -> DiscreteBatch:
    """Re-encode a batch onto the model's variable order and state lists.

    The batch must supply every model variable; a label the model does not
    know raises a cardinality mismatch.
    """
    batch_names = {spec.name for spec in batch.schema}
    missing = [n for n in model.node_names if n not in batch_names]
    if missing:
        raise ValueError(f"batch lacks model variables: {missing}")
    columns = []
    for name in model.node_names:
        spec = model.variable(name)
        src = batch.column_index(name)
        src_states = batch.schema[src].states
        remap = np.asarray([spec.index_of(s) for s in src_states], dtype=np.int64)
        columns.append(remap[batch.codes[:, src]])
    codes = (
        np.column_stack(columns)
        if batch.n_rows
        else np.zeros((0, len(model.node_names)), dtype=np.int64)
    )
    schema = tuple(model.variable(n) for n in model.node_names)
    return DiscreteBatch(schema, codes)


def parl_update(model: BayesNet, batch: DiscreteBatch, prior_weight: float) -> BayesNet:
    """Parameter-only update: per parent-combination row, the new CPT row is
    the convex combination of the old row (weight ``prior_weight``) and the
    batch's relative frequencies for that combination (weight = how often the
    combination occurs in the batch). Rows the batch never touches are kept;
    the structure is untouched. A ``prior_weight`` below the batch size makes
    the new observations dominate.

    An empty batch returns the model unchanged. A batch state label unknown to
    the model raises a cardinality mismatch: the caller must refit through
    ``strl_update`` instead.
    """
    if prior_weight < 0:
        raise ValueError("prior_weight must be >= 0")
    n = batch.n_rows
    if n == 0:
        return model
    recoded = _recode_to_model(model, batch)
    cpts = {}
    for node in model.node_names:
        old = model.cpts[node]
        counts = family_counts(recoded, node, old.parents).astype(np.float64)
        totals = counts.sum(axis=1, keepdims=True)
        old_rows = old.table.reshape(counts.shape)
        denom = prior_weight + totals
        empty = (denom == 0.0).ravel()  # prior_weight 0 and combination unseen
        denom = np.where(denom == 0.0, 1.0, denom)
        table = (prior_weight * old_rows + counts) / denom
        table[empty, :] = 1.0 / model.cardinality(node)
        table /= table.sum(axis=1, keepdims=True)  # guard fp drift
        cpts[node] = Cpt(node, old.parents, table.reshape(old.table.shape))
    return model.with_cpts(cpts, model.sample_weight + n)


def strl_update(
    model: BayesNet | None,
    batch: DiscreteBatch,
    backup: DiscreteBatch,
    *,
    smoothing: float = 0.0,
    stop: StopCriterion | None = None,
) -> tuple[BayesNet, DiscreteBatch]:
    """Full refit: hill-climb structure plus MLE parameters over batch union
    backup. Returns the new model and the new backup (that same union). The
    previous model is superseded by design; the refit starts from the empty
    graph, so the ``model`` argument exists only for interface symmetry."""
    data = batch.union(backup)
    if data.n_rows == 0:
        raise EmptyBatchError("empty batch")
    dag = hill_climb(data, stop=stop)
    refit = mle_fit(dag, data, smoothing=smoothing)
    return refit, data
