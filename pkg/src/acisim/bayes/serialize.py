"""Lossless JSON model documents.

Layout:

    {
      "format": "acisim-model",
      "version": 1,
      "variables": [{"name": ..., "states": [...]}, ...],   # schema order
      "edges": [[parent, child], ...],                       # sorted
      "cpts": {name: {"parents": [...], "table": [...]}},    # row-major flat
      "sample_weight": float
    }

Floats survive a round trip exactly: python's json writes shortest-round-trip
representations (17 significant digits when needed).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from acisim.bayes.model import BayesNet, Cpt
from acisim.bayes.types import Dag, VariableSpec
from acisim.errors import NotNormalizedError

__all__ = ["to_document", "from_document", "save_model", "load_model"]

FORMAT = "acisim-model"


def _plain(value: Any) -> Any:
    """Numpy scalars -> python scalars so json stays portable."""
    if isinstance(value, np.generic):
        return value.item()
    return value


def to_document(model: BayesNet) -> dict:
    return {
        "format": FORMAT,
        "version": 1,
        "variables": [
            {"name": v.name, "states": [_plain(s) for s in v.states]}
            for v in model.variables
        ],
        "edges": [[p, c] for p, c in model.dag.sorted_edges()],
        "cpts": {
            name: {
                "parents": list(model.cpts[name].parents),
                "table": [float(x) for x in model.cpts[name].table.ravel()],
            }
            for name in model.node_names
        },
        "sample_weight": float(model.sample_weight),
    }


def from_document(doc: dict) -> BayesNet:
    if doc.get("format") != FORMAT:
        raise ValueError(f"not a model document (format={doc.get('format')!r})")
    variables = tuple(
        VariableSpec(v["name"], tuple(v["states"])) for v in doc["variables"]
    )
    names = [v.name for v in variables]
    dag = Dag(tuple(names), frozenset((p, c) for p, c in doc["edges"]))
    by_name = {v.name: v for v in variables}
    cpts = {}
    for name in names:
        entry = doc["cpts"].get(name)
        if entry is None:
            raise ValueError(f"missing CPT for {name!r}")
        parents = tuple(entry["parents"])
        if parents != dag.parents(name):
            raise ValueError(f"CPT parents for {name!r} do not match the edges")
        shape = tuple(by_name[p].cardinality for p in parents) + (
            by_name[name].cardinality,
        )
        flat = np.asarray(entry["table"], dtype=np.float64)
        if flat.size != int(np.prod(shape)):
            raise ValueError(f"CPT size for {name!r} does not match cardinalities")
        table = flat.reshape(shape)
        sums = table.sum(axis=-1)
        if np.any(table < 0) or not np.allclose(sums, 1.0, rtol=0.0, atol=1e-9):
            raise NotNormalizedError(f"CPT row not normalized for variable {name!r}")
        cpts[name] = Cpt(name, parents, table)
    return BayesNet(variables, dag, cpts, float(doc["sample_weight"]))


def save_model(model: BayesNet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_document(model), indent=1) + "\n")


def load_model(path: str | Path) -> BayesNet:
    return from_document(json.loads(Path(path).read_text()))
