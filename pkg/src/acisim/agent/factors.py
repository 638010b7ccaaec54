"""Behavioral factor grids steering configuration choice.

Three scores are kept per configuration:

* pragmatic value: model probability that every quality-of-experience SLO
  holds given the configuration,
* risk: the same probability for the quality-of-service SLOs,
* information gain: an exploration score derived from surprise history.

Pragmatic value and risk are inferred only at configurations the agent has
actually run and linearly interpolated over the rest of the grid. The next
configuration maximizes the sum of the three grids with information gain
normalized to [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean, median
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..bayes.inference import markov_blanket, variable_elimination
from ..bayes.model import BayesNet
from ..errors import CardinalityMismatchError, ImpossibleEvidenceError
from .slo import SloSpec
from .space import Config, ParamSpace, interpolate_grid

__all__ = [
    "FactorGrids",
    "fulfillment_probability",
    "pragmatic_value",
    "risk_score",
    "information_gain",
    "build_grids",
    "plan_initial",
]

CORNER_BONUS = 0.3


def fulfillment_probability(
    model: BayesNet, evidence: Mapping[str, object], targets: Iterable[str]
) -> float:
    """Joint probability that every target variable is True given evidence.

    Inference runs on the sub-network spanned by the targets' union Markov
    blanket; evidence outside the blanket cannot influence the result and is
    dropped. Targets the model does not track are vacuously satisfied.
    """
    rank = {name: i for i, name in enumerate(model.node_names)}
    present = sorted(
        {t for t in targets if model.has_variable(t)}, key=rank.__getitem__
    )
    if not present:
        return 1.0

    blanket = markov_blanket(model, present)
    reduced = {k: v for k, v in evidence.items() if k in blanket}
    order = sorted(blanket, key=rank.__getitem__)

    index = []
    for name in present:
        var = model.variable(name)
        if True not in var.states:
            return 0.0
        index.append(var.index_of(True))

    try:
        dist = variable_elimination(
            model, present, evidence=reduced, order=order
        )
    except (ImpossibleEvidenceError, CardinalityMismatchError):
        return 0.0
    return float(dist.values[tuple(index)])


def pragmatic_value(
    model: BayesNet, evidence: Mapping[str, object], slos: Sequence[SloSpec]
) -> float:
    names = [s.name for s in slos if s.tier == "edge" and s.kind == "qoe"]
    return fulfillment_probability(model, evidence, names)


def risk_score(
    model: BayesNet, evidence: Mapping[str, object], slos: Sequence[SloSpec]
) -> float:
    names = [s.name for s in slos if s.tier == "edge" and s.kind == "qos"]
    return fulfillment_probability(model, evidence, names)


def information_gain(
    own_surprises: Sequence[float],
    all_surprises: Sequence[float],
    *,
    pending_corner: bool = False,
    corner_bonus: float = CORNER_BONUS,
) -> float:
    """Exploration score of one configuration.

    Visited configurations score their median surprise relative to the mean
    over every observed surprise, scaled to percent; a flat zero history
    scores zero. Unvisited configurations inherit the largest surprise seen
    anywhere, plus a one-shot bonus while the configuration is a designated
    probe corner that has not been tried yet.
    """
    if own_surprises:
        overall = fmean(all_surprises)
        if overall <= 0.0:
            return 0.0
        return median(own_surprises) / overall * 100.0
    score = max(all_surprises) if all_surprises else 0.0
    if pending_corner:
        score += corner_bonus
    return score


@dataclass
class FactorGrids:
    """Per-configuration scores in the space's grid shape."""

    space: ParamSpace
    pv: np.ndarray
    ra: np.ndarray
    ig: np.ndarray

    def utility(self) -> np.ndarray:
        top = self.ig.max()
        ig_norm = self.ig / top if top > 0.0 else np.zeros_like(self.ig)
        return self.pv + self.ra + ig_norm

    def best_configuration(self) -> Config:
        flat = int(np.argmax(self.utility()))
        index = np.unravel_index(flat, self.space.shape)
        return tuple(
            vals[i] for (_, vals), i in zip(self.space.axes, index)
        )


def build_grids(
    space: ParamSpace,
    scored: Mapping[Config, tuple[float, float]],
    surprises_by_config: Mapping[Config, Sequence[float]],
    all_surprises: Sequence[float],
    pending_corners: Iterable[Config],
    *,
    corner_bonus: float = CORNER_BONUS,
) -> FactorGrids:
    """Assemble full grids from per-visited-configuration measurements.

    ``scored`` maps visited configurations to (pragmatic value, risk);
    both are interpolated across the grid. ``surprises_by_config`` carries
    each visited configuration's surprise history for the gain score.
    """
    if scored:
        pv = interpolate_grid(space, {c: s[0] for c, s in scored.items()})
        ra = interpolate_grid(space, {c: s[1] for c, s in scored.items()})
    else:
        pv = np.zeros(space.shape)
        ra = np.zeros(space.shape)

    pending = set(pending_corners)
    ig = np.empty(space.shape, dtype=np.float64)
    for config in space.configs():
        ig[space.index_of(config)] = information_gain(
            surprises_by_config.get(config, ()),
            all_surprises,
            pending_corner=config in pending,
            corner_bonus=corner_bonus,
        )
    return FactorGrids(space, pv, ra, ig)


def plan_initial(
    model: BayesNet, space: ParamSpace, slos: Sequence[SloSpec]
) -> Config:
    """Starting configuration for an agent seeded with a donated model.

    With no visit history the exploration term is flat, so the choice is the
    grid-wide argmax of pragmatic value plus risk under the donated model.
    Ties break toward the lexicographically first configuration.
    """
    best: Config | None = None
    best_score = -np.inf
    for config in space.configs():
        evidence = space.as_evidence(config)
        score = pragmatic_value(model, evidence, slos) + risk_score(
            model, evidence, slos
        )
        if score > best_score:
            best_score = score
            best = config
    return best
