"""Service level objectives over workload metric rows.

An SLO is a named predicate on one metric. Supported operators:

* ``"<"``  -- metric strictly below a threshold. The threshold is either a
  number or the string ``"<number>/fps"``, a per-frame budget divided by the
  row's fps (used by the in_time objective, whose delay budget shrinks as the
  frame rate grows).
* ``"="``  -- metric equals a state label.
* ``"max"`` -- not a predicate: an optimization direction used by the fog
  tier. Asking evaluate for it is a usage error.

``tier`` is "edge" or "fog"; ``kind`` groups edge SLOs into "qoe"
(quality of experience) and "qos" (quality of service).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

__all__ = [
    "SloSpec",
    "evaluate_slo",
    "evaluate_slos",
    "empirical_fulfillment",
    "default_edge_slos",
    "default_fog_slo",
    "load_slos",
    "save_slos",
]

_OPS = ("<", "=", "max")


def _field(row: object, name: str) -> object:
    if isinstance(row, Mapping):
        return row[name]
    return getattr(row, name)


@dataclass(frozen=True)
class SloSpec:
    name: str
    variable: str
    op: str
    value: object
    tier: str = "edge"
    kind: str = "qos"

    def __post_init__(self) -> None:
        if self.op not in _OPS:
            raise ValueError(f"unknown op {self.op!r} (expected one of {_OPS})")

    def threshold(self, row: object) -> float:
        """Resolve the numeric bound for a ``<`` objective against a row."""
        if isinstance(self.value, str):
            head, sep, tail = self.value.partition("/")
            if sep and tail == "fps":
                return float(head) / float(_field(row, "fps"))
            raise ValueError(f"cannot parse threshold {self.value!r}")
        return float(self.value)


def evaluate_slo(slo: SloSpec, row: object) -> bool:
    """Row may be a mapping or an object with metric attributes."""
    if slo.op == "<":
        return float(_field(row, slo.variable)) < slo.threshold(row)
    if slo.op == "=":
        return _field(row, slo.variable) == slo.value
    raise ValueError(f"SLO {slo.name!r} with op {slo.op!r} is not a predicate")


def evaluate_slos(row: object, slos: Iterable[SloSpec]) -> dict[str, bool]:
    """name -> fulfilled, for every predicate SLO in ``slos``."""
    return {slo.name: evaluate_slo(slo, row) for slo in slos}


def empirical_fulfillment(
    rows: Iterable[object], slos: Iterable[SloSpec]
) -> tuple[float, float]:
    """Fractions of rows meeting every QoE SLO and every QoS SLO.

    The product of the pair is the realized per-batch fulfillment measure.
    Empty input counts as fully fulfilled.
    """
    slos = [s for s in slos if s.tier == "edge"]
    qoe = [s for s in slos if s.kind == "qoe"]
    qos = [s for s in slos if s.kind == "qos"]
    total = qoe_hits = qos_hits = 0
    for row in rows:
        total += 1
        qoe_hits += all(evaluate_slo(s, row) for s in qoe)
        qos_hits += all(evaluate_slo(s, row) for s in qos)
    if total == 0:
        return 1.0, 1.0
    return qoe_hits / total, qos_hits / total


def default_edge_slos() -> tuple[SloSpec, ...]:
    return (
        SloSpec("network", "network", "<", 1.6, "edge", "qos"),
        SloSpec("in_time", "delay", "<", "1000/fps", "edge", "qos"),
        SloSpec("success", "success", "=", True, "edge", "qoe"),
        SloSpec("distance", "distance", "<", 50.0, "edge", "qoe"),
    )


def default_fog_slo() -> SloSpec:
    return SloSpec("slo_rate", "slo_rate", "max", None, "fog", "")


def load_slos(path: str | Path) -> tuple[SloSpec, ...]:
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, list):
        raise ValueError("SLO file must hold a JSON list")
    out = []
    for entry in raw:
        out.append(
            SloSpec(
                entry["name"],
                entry["variable"],
                entry["op"],
                entry.get("value"),
                entry.get("tier", "edge"),
                entry.get("kind", "qos"),
            )
        )
    return tuple(out)


def save_slos(slos: Iterable[SloSpec], path: str | Path) -> None:
    doc = [
        {
            "name": s.name,
            "variable": s.variable,
            "op": s.op,
            "value": s.value,
            "tier": s.tier,
            "kind": s.kind,
        }
        for s in slos
    ]
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")
