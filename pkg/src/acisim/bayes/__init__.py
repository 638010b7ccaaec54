"""Discrete Bayesian networks: structure search, fitting, updating, exact
inference, and lossless JSON serialization."""

from acisim.bayes.inference import (
    Factor,
    markov_blanket,
    query_prob,
    variable_elimination,
)
from acisim.bayes.learning import (
    StopCriterion,
    hill_climb,
    mle_fit,
    parl_update,
    strl_update,
)
from acisim.bayes.model import BayesNet, Cpt
from acisim.bayes.scoring import log_likelihood, score_bic
from acisim.bayes.serialize import from_document, load_model, save_model, to_document
from acisim.bayes.types import Dag, DiscreteBatch, Evidence, State, VariableSpec

__all__ = [
    "BayesNet",
    "Cpt",
    "Dag",
    "DiscreteBatch",
    "Evidence",
    "Factor",
    "State",
    "StopCriterion",
    "VariableSpec",
    "from_document",
    "hill_climb",
    "load_model",
    "log_likelihood",
    "markov_blanket",
    "mle_fit",
    "parl_update",
    "query_prob",
    "save_model",
    "score_bic",
    "strl_update",
    "to_document",
    "variable_elimination",
]
