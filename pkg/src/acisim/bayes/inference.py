"""Markov blankets and exact inference by variable elimination.

``variable_elimination`` answers P(targets | evidence) either over the whole
network or over a sub-model restricted to a queried node set: passing
``order`` declares that the queried nodes are exactly ``set(order) | targets``
and only CPTs whose full scope lies inside that set participate. Conditioning
a variable on its complete Markov blanket therefore gives the same posterior
whether the elimination runs on the full network or only on the blanket.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from acisim.bayes.model import BayesNet
from acisim.bayes.types import Evidence, State
from acisim.errors import ImpossibleEvidenceError

__all__ = ["Factor", "markov_blanket", "variable_elimination", "query_prob"]


@dataclass(eq=False)
class Factor:
    """A nonnegative table over named discrete variables."""

    variables: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        self.variables = tuple(self.variables)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != len(self.variables):
            raise ValueError("factor rank does not match variable count")

    def multiply(self, other: "Factor") -> "Factor":
        merged = self.variables + tuple(
            v for v in other.variables if v not in self.variables
        )
        left = self.values.reshape(self.values.shape + (1,) * (len(merged) - len(self.variables)))
        # move other's axes into merged positions
        perm = [other.variables.index(v) for v in merged if v in other.variables]
        missing = [i for i, v in enumerate(merged) if v not in other.variables]
        right = np.transpose(other.values, perm)
        for axis in missing:
            right = np.expand_dims(right, axis)
        return Factor(merged, left * right)

    def marginalize(self, var: str) -> "Factor":
        axis = self.variables.index(var)
        keep = tuple(v for v in self.variables if v != var)
        return Factor(keep, self.values.sum(axis=axis))

    def reduce(self, var: str, index: int) -> "Factor":
        axis = self.variables.index(var)
        keep = tuple(v for v in self.variables if v != var)
        return Factor(keep, np.take(self.values, index, axis=axis))


def markov_blanket(model: BayesNet, targets: Iterable[str]) -> set[str]:
    """Parents, children, and co-parents of the targets, minus the targets.

    Multiple targets give the union of the individual blankets (minus all
    targets).
    """
    targets = set(targets)
    for t in targets:
        if not model.has_variable(t):
            raise KeyError(t)
    blanket: set[str] = set()
    dag = model.dag
    for t in targets:
        blanket.update(dag.parents(t))
        for child in dag.children(t):
            blanket.add(child)
            blanket.update(dag.parents(child))
    return blanket - targets


def _schema_sorted(model: BayesNet, names: Iterable[str]) -> list[str]:
    pos = {n: i for i, n in enumerate(model.node_names)}
    return sorted(names, key=pos.__getitem__)


def _min_degree_order(scopes: list[set[str]], to_eliminate: list[str]) -> list[str]:
    """Classic min-degree elimination heuristic over the factor-interaction
    graph; ties broken by the given (schema) order of ``to_eliminate``."""
    adjacency: dict[str, set[str]] = {v: set() for v in to_eliminate}
    for scope in scopes:
        for v in scope:
            if v in adjacency:
                adjacency[v].update(scope - {v})
    remaining = list(to_eliminate)
    order = []
    while remaining:
        best = min(remaining, key=lambda v: (len(adjacency[v] & set(remaining)), remaining.index(v)))
        order.append(best)
        remaining.remove(best)
        neighbors = adjacency[best]
        for a in neighbors:
            if a in adjacency:
                adjacency[a].update(neighbors - {a})
                adjacency[a].discard(best)
    return order


def variable_elimination(
    model: BayesNet,
    targets: Iterable[str],
    evidence: Evidence | None = None,
    order: Sequence[str] | None = None,
) -> Factor:
    """Exact joint conditional P(targets | evidence), normalized.

    Parameters
    ----------
    model : BayesNet
    targets : iterable of variable names
        Disjoint from the evidence variables. The result factor's axes follow
        the model's schema order.
    evidence : mapping var -> state label, optional
    order : sequence of variable names, optional
        When given, the queried node set is exactly ``set(order) | targets``
        (targets must not appear in ``order``) and the computation runs on the
        sub-model spanned by that set; evidence variables must belong to it.
        Non-evidence names are eliminated in the listed order. When omitted,
        the full network is queried and a min-degree heuristic picks the
        elimination order.

    A target that ends up with no factor in the sub-model falls back to its
    full-network prior. Evidence with zero probability raises
    ``ImpossibleEvidenceError``.
    """
    evidence = dict(evidence or {})
    target_list = _schema_sorted(model, set(targets))
    if not target_list:
        raise ValueError("no targets")
    for t in target_list:
        if t in evidence:
            raise ValueError(f"target {t!r} is also evidence")

    if order is not None:
        if set(order) & set(target_list):
            raise ValueError("order must not contain targets")
        queried = set(order) | set(target_list)
    else:
        queried = set(model.node_names)
    for var in evidence:
        if var not in queried:
            raise ValueError(f"evidence variable {var!r} is outside the queried node set")

    # Collect the sub-model's factors: a node's CPT participates only when its
    # whole scope lies inside the queried set.
    factors: list[Factor] = []
    covered: set[str] = set()
    for node in model.node_names:
        if node not in queried:
            continue
        cpt = model.cpts[node]
        scope = set(cpt.parents) | {node}
        if scope <= queried:
            factors.append(Factor(cpt.parents + (node,), cpt.table))
            covered.update(scope)
    for t in target_list:
        if t not in covered:
            # disconnected from the sub-model: use the full-network prior
            factors.append(variable_elimination(model, [t]))

    # Slice in the evidence.
    reduced: list[Factor] = []
    for f in factors:
        for var, state in evidence.items():
            if var in f.variables:
                f = f.reduce(var, model.state_index(var, state))
        reduced.append(f)

    hidden = [
        v
        for v in _schema_sorted(model, queried)
        if v not in evidence and v not in target_list
    ]
    if order is not None:
        listed = [v for v in order if v in hidden]
        elimination = listed + [v for v in hidden if v not in listed]
    else:
        elimination = _min_degree_order([set(f.variables) for f in reduced], hidden)

    work = reduced
    for var in elimination:
        touching = [f for f in work if var in f.variables]
        if not touching:
            continue
        product = touching[0]
        for f in touching[1:]:
            product = product.multiply(f)
        work = [f for f in work if var not in f.variables]
        work.append(product.marginalize(var))

    if work:
        result = work[0]
        for f in work[1:]:
            result = result.multiply(f)
    else:
        result = Factor((), np.asarray(1.0))
    # any stray non-target axes (possible only with exotic inputs) get summed out
    for v in [v for v in result.variables if v not in target_list]:
        result = result.marginalize(v)
    # axis order: schema order
    perm = [result.variables.index(v) for v in target_list]
    values = np.transpose(result.values, perm) if result.variables else result.values
    total = float(values.sum())
    if not np.isfinite(total) or total <= 0.0:
        raise ImpossibleEvidenceError("impossible evidence")
    return Factor(tuple(target_list), values / total)


def query_prob(model: BayesNet, var: str, state: State, evidence: Evidence | None = None) -> float:
    """P(var = state | evidence), computed on the Markov blanket of ``var``.

    Evidence outside the blanket is dropped before the query; when the whole
    blanket is observed this equals the full-network posterior (the blanket
    shields the variable), at a fraction of the cost.
    """
    blanket = markov_blanket(model, [var])
    kept = {k: v for k, v in (evidence or {}).items() if k in blanket}
    order = _schema_sorted(model, blanket)
    dist = variable_elimination(model, [var], kept, order)
    return float(dist.values[model.state_index(var, state)])
