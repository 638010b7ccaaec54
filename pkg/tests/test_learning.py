"""Structure search and parameter fitting."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acisim.bayes import (
    Dag,
    DiscreteBatch,
    StopCriterion,
    VariableSpec,
    hill_climb,
    mle_fit,
    parl_update,
    score_bic,
    strl_update,
)
from acisim.errors import CardinalityMismatchError, EmptyBatchError


def binary(name):
    return VariableSpec(name, (0, 1))


def dependent_pair(n=40, flips=2):
    rows = [{"A": a, "B": a} for a in (0, 1)] * (n // 2)
    rows += [{"A": 0, "B": 1}] * flips
    return DiscreteBatch.from_rows([binary("A"), binary("B")], rows)


def independent_pair(n=40):
    rows = [{"A": a, "B": b} for a in (0, 1) for b in (0, 1)] * (n // 4)
    return DiscreteBatch.from_rows([binary("A"), binary("B")], rows)


# -- hill_climb --------------------------------------------------------- #


def test_dependent_pair_learns_one_edge_in_scan_order():
    dag = hill_climb(dependent_pair())
    # (A, B) is scanned before (B, A); both would improve equally
    assert dag.sorted_edges() == [("A", "B")]


def test_independent_pair_stays_empty():
    dag = hill_climb(independent_pair())
    assert dag.sorted_edges() == []


def test_accepted_scores_strictly_increase():
    rng = np.random.default_rng(3)
    names = [f"v{i}" for i in range(5)]
    schema = [VariableSpec(n, (0, 1, 2)) for n in names]
    rows = []
    for _ in range(120):
        v0 = int(rng.integers(3))
        v1 = (v0 + int(rng.random() < 0.15)) % 3
        v2 = int(rng.integers(3))
        v3 = (v1 + v2) % 3 if rng.random() < 0.9 else int(rng.integers(3))
        v4 = int(rng.integers(3))
        rows.append(dict(zip(names, (v0, v1, v2, v3, v4))))
    batch = DiscreteBatch.from_rows(schema, rows)
    scores = []
    dag = hill_climb(batch, accepted_scores=scores)
    assert scores == sorted(scores)
    assert all(b > a for a, b in zip(scores, scores[1:]))
    assert scores[-1] == pytest.approx(score_bic(dag, batch), abs=1e-9)


def test_max_passes_cap():
    batch = dependent_pair()
    assert hill_climb(batch, stop=StopCriterion(max_passes=1)).sorted_edges() == [
        ("A", "B")
    ]
    # max_passes=0 means no search at all
    assert hill_climb(batch, stop=StopCriterion(max_passes=0)).sorted_edges() == []


def test_init_graph_is_respected():
    batch = independent_pair()
    init = Dag(("A", "B"), frozenset({("A", "B")}))
    # additions-only search cannot remove the useless edge
    assert hill_climb(batch, init=init).sorted_edges() == [("A", "B")]
    # with removals enabled it can
    assert hill_climb(batch, init=init, allow_removals=True).sorted_edges() == []


def test_empty_batch_raises():
    with pytest.raises(EmptyBatchError, match="empty batch"):
        hill_climb(DiscreteBatch.empty([binary("A")]))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_hill_climb_output_acyclic_and_score_no_worse_than_empty(seed):
    rng = np.random.default_rng(seed)
    names = [f"v{i}" for i in range(4)]
    schema = [VariableSpec(n, (0, 1)) for n in names]
    rows = [
        {n: int(rng.integers(2)) for n in names} for _ in range(rng.integers(5, 60))
    ]
    batch = DiscreteBatch.from_rows(schema, rows)
    dag = hill_climb(batch)
    assert score_bic(dag, batch) >= score_bic(Dag(tuple(names)), batch) - 1e-9


# -- mle_fit ------------------------------------------------------------ #


def test_mle_frequencies():
    rows = [{"A": 0, "B": 0}] * 3 + [{"A": 0, "B": 1}] + [{"A": 1, "B": 1}] * 4
    batch = DiscreteBatch.from_rows([binary("A"), binary("B")], rows)
    model = mle_fit(Dag(("A", "B"), frozenset({("A", "B")})), batch)
    assert model.cpts["A"].table == pytest.approx([0.5, 0.5])
    assert model.cpts["B"].table[0] == pytest.approx([0.75, 0.25])
    assert model.cpts["B"].table[1] == pytest.approx([0.0, 1.0])
    assert model.sample_weight == 8


def test_mle_smoothing():
    rows = [{"A": 0, "B": 0}] * 3 + [{"A": 0, "B": 1}] + [{"A": 1, "B": 1}] * 4
    batch = DiscreteBatch.from_rows([binary("A"), binary("B")], rows)
    model = mle_fit(Dag(("A", "B"), frozenset({("A", "B")})), batch, smoothing=1.0)
    # (3+1)/(4+2), (1+1)/(4+2)
    assert model.cpts["B"].table[0] == pytest.approx([4 / 6, 2 / 6])
    assert model.cpts["B"].table[1] == pytest.approx([1 / 6, 5 / 6])


def test_mle_unseen_parent_combo_gets_uniform_row():
    # C has parents A and B, but (A=1, B=1) never occurs
    rows = [
        {"A": 0, "B": 0, "C": 0},
        {"A": 0, "B": 1, "C": 1},
        {"A": 1, "B": 0, "C": 0},
    ] * 4
    schema = [binary(n) for n in ("A", "B", "C")]
    dag = Dag(("A", "B", "C"), frozenset({("A", "C"), ("B", "C")}))
    model = mle_fit(dag, DiscreteBatch.from_rows(schema, rows))
    assert model.cpts["C"].table[1, 1] == pytest.approx([0.5, 0.5])


def test_mle_rows_always_normalized():
    rng = np.random.default_rng(11)
    names = ["x", "y", "z"]
    schema = [VariableSpec(n, (0, 1, 2)) for n in names]
    rows = [{n: int(rng.integers(3)) for n in names} for _ in range(30)]
    batch = DiscreteBatch.from_rows(schema, rows)
    dag = Dag(tuple(names), frozenset({("x", "z"), ("y", "z")}))
    for smoothing in (0.0, 0.5, 1.0):
        model = mle_fit(dag, batch, smoothing=smoothing)
        for cpt in model.cpts.values():
            np.testing.assert_allclose(cpt.table.sum(axis=-1), 1.0, atol=1e-12)


# -- parl_update --------------------------------------------------------- #


def test_parl_worked_example():
    # P(B=1) = 0.2 with prior weight 100; 100 new rows, all B=1 -> 0.6
    base_rows = [{"B": 1}] * 20 + [{"B": 0}] * 80
    batch100 = DiscreteBatch.from_rows([binary("B")], base_rows)
    model = mle_fit(Dag(("B",)), batch100)
    assert model.cpts["B"].table == pytest.approx([0.8, 0.2])
    update = DiscreteBatch.from_rows([binary("B")], [{"B": 1}] * 100)
    out = parl_update(model, update, prior_weight=100.0)
    assert out.cpts["B"].table == pytest.approx([0.4, 0.6])
    assert out.dag.edges == model.dag.edges
    assert out.sample_weight == 200


def test_parl_prior_weight_zero_equals_batch_mle():
    model = mle_fit(
        Dag(("B",)), DiscreteBatch.from_rows([binary("B")], [{"B": 0}] * 10)
    )
    update = DiscreteBatch.from_rows([binary("B")], [{"B": 1}] * 3 + [{"B": 0}])
    out = parl_update(model, update, prior_weight=0.0)
    assert out.cpts["B"].table == pytest.approx([0.25, 0.75])


def test_parl_empty_batch_is_identity():
    model = mle_fit(
        Dag(("B",)), DiscreteBatch.from_rows([binary("B")], [{"B": 0}] * 10)
    )
    out = parl_update(model, DiscreteBatch.empty([binary("B")]), prior_weight=10.0)
    assert out is model


def test_parl_unseen_state_label_is_cardinality_mismatch():
    model = mle_fit(
        Dag(("B",)), DiscreteBatch.from_rows([binary("B")], [{"B": 0}] * 10)
    )
    wide = DiscreteBatch.from_rows(
        [VariableSpec("B", (0, 1, 2))], [{"B": 2}] * 3
    )
    with pytest.raises(CardinalityMismatchError, match="cardinality mismatch"):
        parl_update(model, wide, prior_weight=10.0)


def test_parl_untouched_parent_rows_are_preserved():
    rows = [{"A": 0, "B": 0}] * 5 + [{"A": 1, "B": 1}] * 5
    batch = DiscreteBatch.from_rows([binary("A"), binary("B")], rows)
    model = mle_fit(Dag(("A", "B"), frozenset({("A", "B")})), batch)
    update = DiscreteBatch.from_rows(
        [binary("A"), binary("B")], [{"A": 0, "B": 1}] * 10
    )
    out = parl_update(model, update, prior_weight=10.0)
    # A=1 row saw no new data and must stay put
    assert out.cpts["B"].table[1] == pytest.approx(model.cpts["B"].table[1])
    assert out.cpts["B"].table[0] == pytest.approx([0.5, 0.5])


# -- strl_update ---------------------------------------------------------- #


def test_strl_refits_structure_and_returns_union_backup():
    model = mle_fit(
        Dag(("A", "B")), independent_pair()
    )  # structure-less model first
    batch = dependent_pair(n=30, flips=1)
    backup = DiscreteBatch.empty([binary("A"), binary("B")])
    refit, new_backup = strl_update(model, batch, backup)
    assert refit.dag.sorted_edges() == [("A", "B")]
    assert new_backup.n_rows == batch.n_rows
    # next round: backup now feeds the refit
    refit2, backup2 = strl_update(refit, dependent_pair(n=10, flips=1), new_backup)
    assert backup2.n_rows == new_backup.n_rows + 11


def test_strl_widens_cardinality_for_new_labels():
    batch = DiscreteBatch.from_rows([binary("A")], [{"A": 0}] * 5)
    model = mle_fit(Dag(("A",)), batch)
    wide = DiscreteBatch.from_rows(
        [VariableSpec("A", (0, 1, 2))], [{"A": 2}] * 5
    )
    refit, backup = strl_update(model, wide, batch)
    assert refit.variable("A").states == (0, 1, 2)
    assert backup.n_rows == 10


def test_strl_empty_everything_raises():
    empty = DiscreteBatch.empty([binary("A")])
    with pytest.raises(EmptyBatchError, match="empty batch"):
        strl_update(None, empty, empty)
