"""Value types: discrete variables, DAGs, and encoded observation batches.

State labels are ordinary JSON-compatible scalars (str, int, float, bool).
Batches store state *indices* into each variable's declared state list, so all
counting and scoring work on a dense int64 matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping, Sequence

import numpy as np

from acisim.errors import CardinalityMismatchError

State = Any
Evidence = Mapping[str, State]

__all__ = ["State", "Evidence", "VariableSpec", "Dag", "DiscreteBatch"]


@dataclass(frozen=True)
class VariableSpec:
    """A named discrete variable with an ordered, finite state set."""

    name: str
    states: tuple[State, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        if not self.states:
            raise ValueError(f"variable {self.name!r} has no states")
        if len(set(self.states)) != len(self.states):
            raise ValueError(f"variable {self.name!r} has duplicate states")

    @property
    def cardinality(self) -> int:
        return len(self.states)

    def index_of(self, state: State) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise CardinalityMismatchError(
                f"cardinality mismatch: state {state!r} is not a state of "
                f"variable {self.name!r} (states: {list(self.states)!r})"
            ) from None


@dataclass(frozen=True)
class Dag:
    """Directed acyclic graph over named nodes.

    ``nodes`` fixes the canonical (schema) order used everywhere a
    deterministic iteration order is needed: parent tuples, candidate-edge
    scans, elimination orders.
    """

    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node names")
        known = set(self.nodes)
        for parent, child in self.edges:
            if parent not in known or child not in known:
                raise ValueError(f"edge ({parent!r}, {child!r}) references unknown node")
            if parent == child:
                raise ValueError(f"self-loop on {parent!r}")
        if self._find_cycle():
            raise ValueError("graph has a cycle")

    def _find_cycle(self) -> bool:
        color: dict[str, int] = {}  # 0 visiting, 1 done

        def visit(node: str) -> bool:
            color[node] = 0
            for child in self.children(node):
                state = color.get(child)
                if state == 0:
                    return True
                if state is None and visit(child):
                    return True
            color[node] = 1
            return False

        return any(visit(n) for n in self.nodes if n not in color)

    def parents(self, node: str) -> tuple[str, ...]:
        return tuple(p for p in self.nodes if (p, node) in self.edges)

    def children(self, node: str) -> tuple[str, ...]:
        return tuple(c for c in self.nodes if (node, c) in self.edges)

    def has_edge(self, parent: str, child: str) -> bool:
        return (parent, child) in self.edges

    def with_edge(self, parent: str, child: str) -> "Dag":
        return Dag(self.nodes, self.edges | {(parent, child)})

    def without_edge(self, parent: str, child: str) -> "Dag":
        return Dag(self.nodes, self.edges - {(parent, child)})

    def creates_cycle(self, parent: str, child: str) -> bool:
        """Would adding parent -> child close a directed cycle?"""
        # True iff parent is already reachable from child.
        stack, seen = [child], set()
        while stack:
            node = stack.pop()
            if node == parent:
                return True
            if node in seen:
                continue
            seen.add(node)
            stack.extend(self.children(node))
        return False

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(self.edges)


@dataclass(frozen=True, eq=False)
class DiscreteBatch:
    """Jointly observed rows, stored as state indices per schema variable."""

    schema: tuple[VariableSpec, ...]
    codes: np.ndarray  # (n_rows, n_vars) int64

    def __post_init__(self) -> None:
        object.__setattr__(self, "schema", tuple(self.schema))
        codes = np.ascontiguousarray(self.codes, dtype=np.int64)
        if codes.ndim != 2 or codes.shape[1] != len(self.schema):
            raise ValueError("codes shape does not match schema")
        for i, spec in enumerate(self.schema):
            col = codes[:, i]
            if col.size and (col.min() < 0 or col.max() >= spec.cardinality):
                raise CardinalityMismatchError(
                    f"cardinality mismatch: encoded value out of range for {spec.name!r}"
                )
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)

    # -- construction ---------------------------------------------------- #

    @classmethod
    def from_rows(
        cls, schema: Sequence[VariableSpec], rows: Iterable[Mapping[str, State]]
    ) -> "DiscreteBatch":
        schema = tuple(schema)
        encoded = [[spec.index_of(row[spec.name]) for spec in schema] for row in rows]
        codes = np.asarray(encoded, dtype=np.int64).reshape(len(encoded), len(schema))
        return cls(schema, codes)

    @classmethod
    def empty(cls, schema: Sequence[VariableSpec]) -> "DiscreteBatch":
        return cls(tuple(schema), np.zeros((0, len(tuple(schema))), dtype=np.int64))

    # -- access ---------------------------------------------------------- #

    @property
    def n_rows(self) -> int:
        return int(self.codes.shape[0])

    def __len__(self) -> int:
        return self.n_rows

    def variable(self, name: str) -> VariableSpec:
        for spec in self.schema:
            if spec.name == name:
                return spec
        raise KeyError(name)

    def column_index(self, name: str) -> int:
        for i, spec in enumerate(self.schema):
            if spec.name == name:
                return i
        raise KeyError(name)

    def iter_rows(self) -> Iterator[dict[str, State]]:
        for row in self.codes:
            yield {
                spec.name: spec.states[row[i]] for i, spec in enumerate(self.schema)
            }

    # -- combination ------------------------------------------------------ #

    def union(self, other: "DiscreteBatch") -> "DiscreteBatch":
        """Concatenate two batches over the same variable names.

        State lists are widened to the union (this batch's labels first), so a
        batch introducing a new label yields a schema with extended
        cardinality.
        """
        if tuple(s.name for s in self.schema) != tuple(s.name for s in other.schema):
            raise ValueError("batches do not share a schema")
        merged_schema = []
        remap_other = []
        for mine, theirs in zip(self.schema, other.schema):
            states = list(mine.states)
            for s in theirs.states:
                if s not in states:
                    states.append(s)
            merged = VariableSpec(mine.name, tuple(states))
            merged_schema.append(merged)
            remap_other.append(
                np.asarray([merged.index_of(s) for s in theirs.states], dtype=np.int64)
            )
        if other.n_rows:
            other_codes = np.column_stack(
                [remap_other[i][other.codes[:, i]] for i in range(len(remap_other))]
            )
        else:
            other_codes = np.zeros((0, len(merged_schema)), dtype=np.int64)
        codes = np.vstack([self.codes, other_codes])
        return DiscreteBatch(tuple(merged_schema), codes)
