"""Device-side agent: objectives, surprise, and configuration planning."""

from .factors import (
    FactorGrids,
    build_grids,
    fulfillment_probability,
    information_gain,
    pragmatic_value,
    risk_score,
)
from .loop import AgentHyper, AgentState, IterationRecord, iterate, new_agent
from .slo import (
    SloSpec,
    default_edge_slos,
    default_fog_slo,
    empirical_fulfillment,
    evaluate_slo,
    evaluate_slos,
    load_slos,
    save_slos,
)
from .space import Config, ParamSpace, default_space, interpolate_grid
from .surprise import PROB_FLOOR, surprise

__all__ = [
    "AgentHyper",
    "AgentState",
    "Config",
    "FactorGrids",
    "IterationRecord",
    "PROB_FLOOR",
    "ParamSpace",
    "SloSpec",
    "build_grids",
    "default_edge_slos",
    "default_fog_slo",
    "default_space",
    "empirical_fulfillment",
    "evaluate_slo",
    "evaluate_slos",
    "fulfillment_probability",
    "information_gain",
    "interpolate_grid",
    "iterate",
    "load_slos",
    "new_agent",
    "pragmatic_value",
    "risk_score",
    "save_slos",
    "surprise",
]
