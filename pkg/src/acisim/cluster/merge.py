"""Donor selection and model merging for transfer between devices.

A device joining the cluster gets a starting model built from the registry:
the donors with the closest capacity scalars are picked (a bracketing pair
when the new device falls between two donors), and their models are merged
cellwise when their structures agree, else by refitting one donor's
parameters with the other donor's backup data.
"""

from __future__ import annotations

import math

import numpy as np

from ..bayes.learning import parl_update
from ..bayes.model import BayesNet, Cpt
from ..bayes.scoring import log_likelihood
from ..bayes.types import DiscreteBatch, VariableSpec
from ..errors import EmptyBatchError, IncompatibleModelsError
from .registry import RegistryEntry

__all__ = ["merge_cpts", "merge_via_refit", "select_donors", "merge_donors"]

WEIGHT_ATOL = 1e-9


def _check_weights(w_a: float, w_b: float) -> None:
    if w_a < 0 or w_b < 0:
        raise ValueError("merge weights must be nonnegative")
    if abs(w_a + w_b - 1.0) > WEIGHT_ATOL:
        raise ValueError("merge weights must sum to 1")


def merge_cpts(m_a: BayesNet, m_b: BayesNet, w_a: float, w_b: float) -> BayesNet:
    """Cellwise convex combination of two structurally identical models."""
    _check_weights(w_a, w_b)
    if m_a.variables != m_b.variables or m_a.dag.sorted_edges() != m_b.dag.sorted_edges():
        raise IncompatibleModelsError("incompatible models")
    cpts = {}
    for node in m_a.node_names:
        a, b = m_a.cpts[node], m_b.cpts[node]
        table = w_a * a.table + w_b * b.table
        cpts[node] = Cpt(node, a.parents, table / table.sum(axis=-1, keepdims=True))
    weight = w_a * m_a.sample_weight + w_b * m_b.sample_weight
    return m_a.with_cpts(cpts, weight)


def _widened(model: BayesNet, schema: tuple[VariableSpec, ...]) -> BayesNet:
    """Extend the model's state lists to cover a batch schema's extra labels.

    New child states get probability 0 (rows stay normalized); new parent
    combinations get uniform rows. Variables the batch lacks are untouched.
    """
    by_batch = {v.name: v for v in schema}
    widened: dict[str, VariableSpec] = {}
    for spec in model.variables:
        extra = [
            s
            for s in by_batch.get(spec.name, spec).states
            if s not in spec.states
        ]
        widened[spec.name] = (
            VariableSpec(spec.name, spec.states + tuple(extra)) if extra else spec
        )
    if all(widened[v.name] is v for v in model.variables):
        return model
    cpts = {}
    for node in model.node_names:
        old = model.cpts[node]
        axes = old.parents + (node,)
        table = old.table
        for axis, name in enumerate(axes):
            grow = widened[name].cardinality - table.shape[axis]
            if grow == 0:
                continue
            pad = np.zeros(
                table.shape[:axis] + (grow,) + table.shape[axis + 1 :], dtype=np.float64
            )
            if name != node:
                pad += 1.0 / table.shape[-1]  # unseen parent combination: uniform
            table = np.concatenate([table, pad], axis=axis)
        cpts[node] = Cpt(node, old.parents, table)
    variables = tuple(widened[v.name] for v in model.variables)
    return BayesNet(variables, model.dag, cpts, model.sample_weight)


def merge_via_refit(
    m_a: BayesNet, d_b: DiscreteBatch, w_a: float, w_b: float
) -> BayesNet:
    """Merge fallback for structurally different donors: keep m_a's structure
    and blend its parameters with d_b, the other donor's backup data. The
    prior weight |d_b| * w_a / w_b gives the two sides the requested relative
    influence measured in rows."""
    _check_weights(w_a, w_b)
    if d_b.n_rows == 0 or w_b == 0.0:
        return m_a
    prior = d_b.n_rows * w_a / w_b
    return parl_update(_widened(m_a, tuple(d_b.schema)), d_b, prior)


def select_donors(
    entries: list[RegistryEntry], dc_x: int
) -> list[tuple[RegistryEntry, float]]:
    """Donors with the closest capacity scalar to dc_x.

    An exact-dc donor (or one when all others are strictly farther on one
    side) is returned alone with weight 1. When dc_x falls between donors,
    the nearest one below (a) and above (b) are returned with weights
    w_a = (dc_b - dc_x) / (dc_b - dc_a) and w_b = 1 - w_a, so the nearer
    donor carries the larger weight. Ties go to the earliest registrant.
    """
    if not entries:
        raise ValueError("no registry entries")
    exact = [e for e in entries if e.dc == dc_x]
    if exact:
        return [(exact[0], 1.0)]
    below = [e for e in entries if e.dc < dc_x]
    above = [e for e in entries if e.dc > dc_x]
    if not below or not above:
        side = below or above
        nearest = min(side, key=lambda e: abs(e.dc - dc_x))
        return [(nearest, 1.0)]
    a = max(below, key=lambda e: e.dc)
    b = min(above, key=lambda e: e.dc)
    w_a = (b.dc - dc_x) / (b.dc - a.dc)
    return [(a, w_a), (b, 1.0 - w_a)]


WeightedDonor = tuple[RegistryEntry, float]


def _structure_score(dag, data: DiscreteBatch) -> float:
    """Log-likelihood of the data under the dag's MLE parameters, penalized
    by 0.5 * ln(n) per free parameter. Heavier than the edge-count penalty
    used during structure search, so spurious edges a donor overfit onto its
    own trajectory do not win the base choice on pooled evidence."""
    cards = {v.name: v.cardinality for v in data.schema}
    n_params = sum(
        (cards[node] - 1) * math.prod(cards[p] for p in dag.parents(node))
        for node in dag.nodes
    )
    return log_likelihood(dag, data) - 0.5 * math.log(data.n_rows) * n_params


def _refit_base_first(
    a: WeightedDonor, b: WeightedDonor
) -> tuple[WeightedDonor, WeightedDonor]:
    """Order a donor pair for the refit fallback: the donor whose structure
    explains the pooled backup data better becomes the base whose dag the
    merged model keeps. Falls back to the lower-dc donor when the backups
    cannot be pooled or are empty."""
    try:
        pooled = a[0].backup.union(b[0].backup)
        if _structure_score(b[0].model.dag, pooled) > _structure_score(a[0].model.dag, pooled):
            return b, a
        return a, b
    except (EmptyBatchError, KeyError, ValueError):
        return (a, b) if a[0].dc <= b[0].dc else (b, a)


def merge_donors(entries: list[RegistryEntry], dc_x: int) -> BayesNet:
    """Starting model for a device with capacity dc_x: select donors, merge.

    With one donor its model is returned as-is. With a bracketing pair, the
    cellwise merge is tried first; structurally different donors fall back to
    the refit path, keeping the structure of whichever donor scores better
    on the pooled backups and folding in the other donor's backup data.
    """
    picked = select_donors(entries, dc_x)
    if len(picked) == 1:
        return picked[0][0].model
    (a, w_a), (b, w_b) = picked
    try:
        return merge_cpts(a.model, b.model, w_a, w_b)
    except IncompatibleModelsError:
        (base, w_base), (other, w_other) = _refit_base_first((a, w_a), (b, w_b))
        return merge_via_refit(base.model, other.backup, w_base, w_other)
