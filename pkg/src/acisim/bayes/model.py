"""Conditional probability tables and the Bayesian network container."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from acisim.bayes.types import Dag, State, VariableSpec
from acisim.errors import NotNormalizedError

__all__ = ["Cpt", "BayesNet"]

ROW_SUM_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class Cpt:
    """P(var | parents) as a dense table.

    Axes are (parent_1, ..., parent_k, var) in the given parent order; each
    axis is indexed by that variable's state index. Every row (slice along the
    last axis) sums to one.
    """

    var: str
    parents: tuple[str, ...]
    table: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "parents", tuple(self.parents))
        table = np.ascontiguousarray(self.table, dtype=np.float64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        if table.ndim != len(self.parents) + 1:
            raise ValueError(f"CPT for {self.var!r}: table rank does not match parents")
        if np.any(table < -ROW_SUM_ATOL):
            raise NotNormalizedError(f"CPT row not normalized: negative entry for {self.var!r}")
        sums = table.sum(axis=-1)
        if not np.allclose(sums, 1.0, rtol=0.0, atol=ROW_SUM_ATOL):
            raise NotNormalizedError(f"CPT row not normalized for variable {self.var!r}")

    @property
    def n_entries(self) -> int:
        return int(self.table.size)


@dataclass(frozen=True, eq=False)
class BayesNet:
    """A discrete Bayesian network: DAG, one CPT per node, and the number of
    observation rows the parameters were fitted from (``sample_weight``)."""

    variables: tuple[VariableSpec, ...]
    dag: Dag
    cpts: Mapping[str, Cpt]
    sample_weight: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "cpts", dict(self.cpts))
        by_name = {v.name: v for v in self.variables}
        object.__setattr__(self, "_by_name", by_name)
        if tuple(by_name) != self.dag.nodes:
            raise ValueError("dag nodes do not match schema variables")
        for name in self.dag.nodes:
            cpt = self.cpts.get(name)
            if cpt is None:
                raise ValueError(f"missing CPT for {name!r}")
            if cpt.parents != self.dag.parents(name):
                raise ValueError(f"CPT parents for {name!r} do not match the dag")
            expected = tuple(by_name[p].cardinality for p in cpt.parents) + (
                by_name[name].cardinality,
            )
            if cpt.table.shape != expected:
                raise ValueError(f"CPT shape for {name!r} does not match cardinalities")

    # -- lookups ----------------------------------------------------------- #

    @property
    def node_names(self) -> tuple[str, ...]:
        return self.dag.nodes

    def variable(self, name: str) -> VariableSpec:
        return self._by_name[name]

    def has_variable(self, name: str) -> bool:
        return name in self._by_name

    def cardinality(self, name: str) -> int:
        return self._by_name[name].cardinality

    def state_index(self, name: str, state: State) -> int:
        return self._by_name[name].index_of(state)

    def with_cpts(self, cpts: Mapping[str, Cpt], sample_weight: float) -> "BayesNet":
        return BayesNet(self.variables, self.dag, cpts, sample_weight)
