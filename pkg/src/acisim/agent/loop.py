"""Per-round agent loop tying learning, surprise and planning together.

Each round the device runs its current configuration, collects a batch of
discretized metrics and feeds it to :func:`iterate`, which

1. scores the batch's surprise under the current model,
2. retrains when the surprise is out of line with recent history: above the
   running median the model parameters are reweighted on the new batch,
   above ``structural_threshold`` times the median the structure itself is
   relearned from the batch plus everything seen before,
3. rebuilds the factor grids and picks the configuration with the highest
   combined pragmatic value, risk and (normalized) information gain.

The first batch bootstraps the model instead: structure and parameters are
learned from scratch and that round's surprise, taken against the freshly
fitted model, seeds the history.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import median

from ..bayes.learning import hill_climb, mle_fit, parl_update, strl_update
from ..bayes.model import BayesNet
from ..bayes.types import DiscreteBatch
from ..errors import CardinalityMismatchError
from .factors import FactorGrids, build_grids, pragmatic_value, risk_score
from .slo import SloSpec, default_edge_slos
from .space import Config, ParamSpace
from .surprise import surprise

__all__ = [
    "AgentHyper",
    "AgentState",
    "IterationRecord",
    "new_agent",
    "iterate",
    "replace_slos",
]


@dataclass(frozen=True)
class AgentHyper:
    structural_threshold: float = 1.5
    corner_bonus: float = 0.3
    smoothing: float = 1.0
    prior_weight: float = 20.0
    history_window: int = 10


@dataclass(frozen=True)
class IterationRecord:
    round_index: int
    surprise: float
    learning_action: str
    pv: float
    ra: float
    config: Config


@dataclass
class AgentState:
    space: ParamSpace
    slos: tuple[SloSpec, ...]
    config: Config
    hyper: AgentHyper = AgentHyper()
    model: BayesNet | None = None
    backup: DiscreteBatch | None = None
    surprise_log: list[float] = field(default_factory=list)
    surprises_by_config: dict[Config, list[float]] = field(default_factory=dict)
    pending_corners: set[Config] = field(default_factory=set)
    grids: FactorGrids | None = None
    last: IterationRecord | None = None
    round_index: int = 0
    model_version: int = 0
    _scored: dict[Config, tuple[float, float]] = field(default_factory=dict)
    _scored_version: int = -1

    @property
    def visited(self) -> set[Config]:
        return set(self.surprises_by_config)

    def slo_variables(self) -> list[str]:
        return [s.name for s in self.slos if s.tier == "edge"]


def new_agent(
    space: ParamSpace,
    start: Config,
    slos: tuple[SloSpec, ...] | None = None,
    hyper: AgentHyper = AgentHyper(),
) -> AgentState:
    if slos is None:
        slos = default_edge_slos()
    if len(start) != len(space.axes):
        raise ValueError("start configuration does not match the space")
    return AgentState(
        space=space,
        slos=slos,
        config=start,
        hyper=hyper,
        pending_corners=set(space.corner_configs()),
    )


def replace_slos(state: AgentState, slos: tuple[SloSpec, ...]) -> None:
    """Swap the agent's SLO list at runtime.

    Cached per-configuration scores were computed against the old objectives
    and must be dropped; the model itself is kept (the old SLO variables stay
    in the network until the next structural refit absorbs the new columns).
    """
    state.slos = slos
    state._scored.clear()
    state._scored_version = -1


def _learn(state: AgentState, batch: DiscreteBatch, s: float) -> str:
    """Apply the learning rule for surprise ``s``; returns the action taken."""
    window = state.surprise_log[-state.hyper.history_window :]
    threshold = median(window)

    if s > threshold * state.hyper.structural_threshold:
        action = "strl"
    elif s > threshold:
        action = "parl"
    else:
        action = "none"

    if action == "parl":
        try:
            state.model = parl_update(
                state.model, batch, state.hyper.prior_weight
            )
        except CardinalityMismatchError:
            action = "strl"

    if action == "strl":
        state.model, state.backup = strl_update(
            state.model, batch, state.backup, smoothing=state.hyper.smoothing
        )
    else:
        state.backup = state.backup.union(batch)

    if action != "none":
        state.model_version += 1
    return action


def _score_visited(state: AgentState) -> dict[Config, tuple[float, float]]:
    """Pragmatic value and risk per visited configuration, cached per model."""
    if state._scored_version != state.model_version:
        state._scored.clear()
        state._scored_version = state.model_version
    for config in state.surprises_by_config:
        if config not in state._scored:
            evidence = state.space.as_evidence(config)
            state._scored[config] = (
                pragmatic_value(state.model, evidence, state.slos),
                risk_score(state.model, evidence, state.slos),
            )
    return state._scored


def iterate(
    state: AgentState, batch: DiscreteBatch
) -> tuple[AgentState, Config]:
    """Consume one metrics batch; returns the state and the next config."""
    measured_at = state.config

    if state.model is None:
        dag = hill_climb(batch)
        state.model = mle_fit(dag, batch, smoothing=state.hyper.smoothing)
        state.backup = batch
        state.model_version += 1
        action = "strl"
        s = surprise(state.model, batch, state.slo_variables())
        state.surprise_log.append(s)
    else:
        s = surprise(state.model, batch, state.slo_variables())
        state.surprise_log.append(s)
        action = _learn(state, batch, s)

    state.surprises_by_config.setdefault(measured_at, []).append(s)
    state.pending_corners.discard(measured_at)

    state.grids = build_grids(
        state.space,
        _score_visited(state),
        state.surprises_by_config,
        state.surprise_log,
        state.pending_corners,
        corner_bonus=state.hyper.corner_bonus,
    )
    chosen = state.grids.best_configuration()
    index = state.space.index_of(chosen)

    state.round_index += 1
    state.last = IterationRecord(
        round_index=state.round_index,
        surprise=s,
        learning_action=action,
        pv=float(state.grids.pv[index]),
        ra=float(state.grids.ra[index]),
        config=chosen,
    )
    state.config = chosen
    return state, chosen
