"""Log-likelihood and penalized score."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acisim.bayes import Dag, DiscreteBatch, VariableSpec, log_likelihood, score_bic
from acisim.errors import EmptyBatchError

from oracles import loglik_by_counting


def binary(name):
    return VariableSpec(name, (0, 1))


def test_single_variable_uniform_rows():
    # 4 rows, two of each state: every row contributes ln(0.5)
    data = DiscreteBatch.from_rows([binary("A")], [{"A": s} for s in (1, 1, 0, 0)])
    assert log_likelihood(Dag(("A",)), data) == pytest.approx(-2.772588722239781, abs=1e-12)


def test_score_penalty_single_node_empty_graph():
    data = DiscreteBatch.from_rows([binary("A")], [{"A": s} for s in (1, 1, 0, 0)])
    # ll - (0.5*ln(4) + 1 node + 0 edges)
    assert score_bic(Dag(("A",)), data) == pytest.approx(-4.465735902799727, abs=1e-12)


def test_chain_log_likelihood_matches_counting_oracle():
    rows = [{"A": 0, "B": 0}] * 3 + [{"A": 0, "B": 1}] + [{"A": 1, "B": 1}] * 4
    data = DiscreteBatch.from_rows([binary("A"), binary("B")], rows)
    chain = Dag(("A", "B"), frozenset({("A", "B")}))
    assert log_likelihood(chain, data) == pytest.approx(-7.7945180229547955, abs=1e-12)
    assert score_bic(chain, data) == pytest.approx(-11.834238793794714, abs=1e-12)
    # and the oracle agrees with the frozen value
    oracle = loglik_by_counting(
        [dict(r) for r in rows], {"A": (), "B": ("A",)}
    )
    assert oracle == pytest.approx(-7.7945180229547955, abs=1e-12)


def test_deterministic_dependence_scores_zero_loglik():
    rows = [{"A": a, "B": a} for a in (0, 1, 0, 1)]
    data = DiscreteBatch.from_rows([binary("A"), binary("B")], rows)
    chain = Dag(("A", "B"), frozenset({("A", "B")}))
    # B is a function of A: the B|A term vanishes
    assert log_likelihood(chain, data) == pytest.approx(4 * math.log(0.5), abs=1e-12)


def test_empty_batch_rejected():
    data = DiscreteBatch.empty([binary("A")])
    with pytest.raises(EmptyBatchError, match="empty batch"):
        log_likelihood(Dag(("A",)), data)
    with pytest.raises(EmptyBatchError, match="empty batch"):
        score_bic(Dag(("A",)), data)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_loglik_matches_oracle_on_random_data(data_strategy):
    n_vars = data_strategy.draw(st.integers(2, 4))
    cards = [data_strategy.draw(st.integers(2, 3)) for _ in range(n_vars)]
    names = [f"v{i}" for i in range(n_vars)]
    schema = [VariableSpec(n, tuple(range(c))) for n, c in zip(names, cards)]
    n_rows = data_strategy.draw(st.integers(1, 25))
    rows = [
        {n: data_strategy.draw(st.integers(0, c - 1)) for n, c in zip(names, cards)}
        for _ in range(n_rows)
    ]
    batch = DiscreteBatch.from_rows(schema, rows)
    # random forward DAG: edges only from lower to higher index keeps it acyclic
    edges = set()
    for i in range(n_vars):
        for j in range(i + 1, n_vars):
            if data_strategy.draw(st.booleans()):
                edges.add((names[i], names[j]))
    dag = Dag(tuple(names), frozenset(edges))
    parents_of = {n: dag.parents(n) for n in names}
    assert log_likelihood(dag, batch) == pytest.approx(
        loglik_by_counting(rows, parents_of), abs=1e-9
    )


def test_adding_edge_never_lowers_loglik():
    rng = np.random.default_rng(7)
    names = ["a", "b", "c"]
    schema = [VariableSpec(n, (0, 1, 2)) for n in names]
    rows = [
        {n: int(rng.integers(0, 3)) for n in names} for _ in range(40)
    ]
    batch = DiscreteBatch.from_rows(schema, rows)
    base = Dag(tuple(names))
    ll0 = log_likelihood(base, batch)
    for p, c in [("a", "b"), ("b", "c"), ("a", "c")]:
        assert log_likelihood(base.with_edge(p, c), batch) >= ll0 - 1e-9
