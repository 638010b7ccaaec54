"""Turning raw metric rows into fixed-cardinality discrete batches.

Configuration axes keep their native grid values as categories. Each SLO
becomes a boolean variable that replaces its source metric column (the model
reasons about objective fulfillment, not raw magnitudes). Every other metric
is binned into equal-width bins with edges fixed up front, labeled by bin
midpoint, and out-of-range values clamp to the edge bins. Declaring the full
state list per variable up front keeps cardinalities constant across rounds,
which parameter reweighting requires.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..agent.slo import SloSpec, evaluate_slos
from ..agent.space import ParamSpace
from ..bayes.types import DiscreteBatch, VariableSpec
from .workload import METRIC_COLUMNS, MetricsRow

__all__ = ["ColumnBinning", "BinningSpec", "default_edge_binning", "discretize"]

_NUMERIC_RANGES = {
    "bitrate": (0.0, 14400.0),
    "cpu": (0.0, 1.0),
    "memory": (0.0, 1.0),
    "streams": (0.0, 8.0),
    "consumption": (0.0, 12.0),
}
DEFAULT_BIN_COUNT = 4


@dataclass(frozen=True)
class ColumnBinning:
    """How one output column is produced from raw rows.

    kind "grid": source value must equal one of the declared states.
    kind "bins": source value falls into fixed equal-width bins; states are
    the bin midpoints. kind "slo": boolean fulfillment of the named SLO.
    """

    name: str
    kind: str
    source: str
    states: tuple
    edges: tuple[float, ...] = ()

    def encode(self, value: object) -> int:
        if self.kind == "slo":
            return int(bool(value))
        if self.kind == "grid":
            return self.states.index(value)
        inner = self.edges[1:-1]
        return int(np.searchsorted(inner, float(value), side="right"))


@dataclass(frozen=True)
class BinningSpec:
    columns: tuple[ColumnBinning, ...]

    def schema(self) -> tuple[VariableSpec, ...]:
        return tuple(VariableSpec(c.name, c.states) for c in self.columns)


def _equal_width(name: str, source: str, lo: float, hi: float, bins: int) -> ColumnBinning:
    edges = np.linspace(lo, hi, bins + 1)
    midpoints = tuple(float(m) for m in (edges[:-1] + edges[1:]) / 2.0)
    return ColumnBinning(name, "bins", source, midpoints, tuple(float(e) for e in edges))


def default_edge_binning(
    space: ParamSpace,
    slos: Sequence[SloSpec],
    bins: int = DEFAULT_BIN_COUNT,
) -> BinningSpec:
    """Table-ordered binning: config axes, binned metrics, SLO booleans."""
    slo_by_source = {s.variable: s for s in slos if s.tier == "edge"}
    axis_values = dict(space.axes)
    columns = []
    for col in METRIC_COLUMNS:
        if col in slo_by_source:
            slo = slo_by_source[col]
            columns.append(ColumnBinning(slo.name, "slo", col, (False, True)))
        elif col in axis_values:
            columns.append(
                ColumnBinning(col, "grid", col, tuple(axis_values[col]))
            )
        else:
            lo, hi = _NUMERIC_RANGES[col]
            columns.append(_equal_width(col, col, lo, hi, bins))
    return BinningSpec(tuple(columns))


def discretize(
    rows: Sequence[MetricsRow],
    binning: BinningSpec,
    slos: Sequence[SloSpec],
) -> DiscreteBatch:
    """Encode raw rows against fixed bins; SLO columns come from predicates."""
    schema = binning.schema()
    codes = np.empty((len(rows), len(binning.columns)), dtype=np.int64)
    predicates = [s for s in slos if s.tier == "edge"]
    for i, row in enumerate(rows):
        verdicts = evaluate_slos(row, predicates)
        for j, column in enumerate(binning.columns):
            if column.kind == "slo":
                codes[i, j] = column.encode(verdicts[column.name])
            else:
                codes[i, j] = column.encode(getattr(row, column.source))
    return DiscreteBatch(schema, codes)
