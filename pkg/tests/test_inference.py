"""Markov blankets and variable elimination, checked against enumeration."""

import numpy as np
import pytest

from acisim.bayes import (
    BayesNet,
    Cpt,
    Dag,
    DiscreteBatch,
    VariableSpec,
    markov_blanket,
    mle_fit,
    query_prob,
    variable_elimination,
)
from acisim.errors import ImpossibleEvidenceError

from oracles import enumerate_posterior


def random_net(seed, n_vars=5, max_card=3, edge_prob=0.4):
    """A random forward DAG with Dirichlet CPT rows."""
    rng = np.random.default_rng(seed)
    names = [f"v{i}" for i in range(n_vars)]
    cards = [int(rng.integers(2, max_card + 1)) for _ in range(n_vars)]
    variables = tuple(
        VariableSpec(n, tuple(range(c))) for n, c in zip(names, cards)
    )
    edges = set()
    for i in range(n_vars):
        for j in range(i + 1, n_vars):
            if rng.random() < edge_prob:
                edges.add((names[i], names[j]))
    dag = Dag(tuple(names), frozenset(edges))
    cpts = {}
    for i, name in enumerate(names):
        parents = dag.parents(name)
        pshape = tuple(cards[names.index(p)] for p in parents)
        rows = rng.dirichlet(np.ones(cards[i]), size=int(np.prod(pshape, dtype=int)))
        cpts[name] = Cpt(name, parents, rows.reshape(pshape + (cards[i],)))
    return BayesNet(variables, dag, cpts, 100.0)


def fig_shaped_net():
    """Small collider layout: bitrate -> network <- streams, network childless,
    plus an unrelated pair."""
    rng = np.random.default_rng(0)
    names = ("bitrate", "streams", "network", "cpu", "noise")
    variables = tuple(VariableSpec(n, (0, 1)) for n in names)
    edges = frozenset(
        {("bitrate", "network"), ("streams", "network"), ("cpu", "noise")}
    )
    dag = Dag(names, edges)
    cpts = {}
    for name in names:
        parents = dag.parents(name)
        pshape = tuple(2 for _ in parents)
        rows = rng.dirichlet((1.0, 1.0), size=int(np.prod(pshape, dtype=int)))
        cpts[name] = Cpt(name, parents, rows.reshape(pshape + (2,)))
    return BayesNet(variables, dag, cpts, 10.0)


# -- markov_blanket ------------------------------------------------------ #


def test_blanket_of_collider_child():
    net = fig_shaped_net()
    assert markov_blanket(net, ["network"]) == {"bitrate", "streams"}


def test_blanket_includes_coparents():
    net = fig_shaped_net()
    # bitrate's blanket: child network plus co-parent streams
    assert markov_blanket(net, ["bitrate"]) == {"network", "streams"}


def test_blanket_isolated_node_empty():
    names = ("a", "b")
    variables = tuple(VariableSpec(n, (0, 1)) for n in names)
    cpts = {
        n: Cpt(n, (), np.array([0.5, 0.5])) for n in names
    }
    net = BayesNet(variables, Dag(names), cpts, 1.0)
    assert markov_blanket(net, ["a"]) == set()


def test_blanket_union_excludes_targets():
    net = fig_shaped_net()
    mb = markov_blanket(net, ["network", "bitrate"])
    assert mb == {"streams"}


# -- variable_elimination ------------------------------------------------- #


def test_matches_enumeration_on_seeded_nets():
    for seed in range(30):
        net = random_net(seed)
        rng = np.random.default_rng(seed + 1000)
        names = list(net.node_names)
        target = names[int(rng.integers(len(names)))]
        ev_candidates = [n for n in names if n != target]
        evidence = {}
        for n in ev_candidates:
            if rng.random() < 0.4:
                evidence[n] = int(rng.integers(net.cardinality(n)))
        try:
            expected = enumerate_posterior(net, [target], evidence)
        except ValueError:
            continue
        got = variable_elimination(net, [target], evidence)
        for idx, state in enumerate(net.variable(target).states):
            assert got.values[idx] == pytest.approx(
                expected.get((state,), 0.0), abs=1e-9
            )


def test_joint_targets_match_enumeration():
    net = random_net(123, n_vars=4)
    expected = enumerate_posterior(net, ["v1", "v3"], {"v0": 0})
    got = variable_elimination(net, ["v1", "v3"], {"v0": 0})
    for i, s1 in enumerate(net.variable("v1").states):
        for j, s3 in enumerate(net.variable("v3").states):
            assert got.values[i, j] == pytest.approx(
                expected.get((s1, s3), 0.0), abs=1e-9
            )


def test_blanket_restriction_equals_full_network():
    # condition on the full blanket: restricted and full queries agree
    for seed in range(20):
        net = random_net(seed, n_vars=6)
        rng = np.random.default_rng(seed)
        target = net.node_names[int(rng.integers(6))]
        blanket = markov_blanket(net, [target])
        evidence = {
            n: net.variable(n).states[int(rng.integers(net.cardinality(n)))]
            for n in sorted(blanket)
        }
        try:
            full = variable_elimination(net, [target], evidence)
        except ImpossibleEvidenceError:
            continue
        order = [n for n in net.node_names if n in blanket]
        restricted = variable_elimination(net, [target], evidence, order=order)
        np.testing.assert_allclose(restricted.values, full.values, atol=1e-9)


def test_extra_evidence_outside_blanket_changes_nothing():
    for seed in range(10):
        net = random_net(seed, n_vars=6)
        rng = np.random.default_rng(seed + 1)
        target = net.node_names[0]
        blanket = markov_blanket(net, [target])
        evidence = {
            n: net.variable(n).states[int(rng.integers(net.cardinality(n)))]
            for n in sorted(blanket)
        }
        outside = [n for n in net.node_names if n != target and n not in blanket]
        extra = dict(evidence)
        for n in outside:
            extra[n] = net.variable(n).states[int(rng.integers(net.cardinality(n)))]
        try:
            base = variable_elimination(net, [target], evidence)
            more = variable_elimination(net, [target], extra)
        except ImpossibleEvidenceError:
            continue
        np.testing.assert_allclose(base.values, more.values, atol=1e-9)


def test_posterior_normalized_and_explicit_order_accepted():
    net = random_net(5)
    target = net.node_names[2]
    order = [n for n in net.node_names if n != target]
    out = variable_elimination(net, [target], {}, order=order)
    assert out.values.sum() == pytest.approx(1.0, abs=1e-12)


def test_disconnected_target_returns_prior():
    names = ("a", "b")
    variables = tuple(VariableSpec(n, (0, 1)) for n in names)
    cpts = {
        "a": Cpt("a", (), np.array([0.3, 0.7])),
        "b": Cpt("b", (), np.array([0.9, 0.1])),
    }
    net = BayesNet(variables, Dag(names), cpts, 1.0)
    out = variable_elimination(net, ["a"], {"b": 0}, order=["b"])
    assert out.values == pytest.approx([0.3, 0.7])


def test_impossible_evidence_raises():
    # every observed row is (A=0, B=0): evidence B=1 has probability zero
    rows = [{"A": 0, "B": 0}] * 10
    batch = DiscreteBatch.from_rows(
        [VariableSpec("A", (0, 1)), VariableSpec("B", (0, 1))], rows
    )
    model = mle_fit(Dag(("A", "B"), frozenset({("A", "B")})), batch)
    # P(A=1) = 0 and P(B=1|A=0) = 0, so B=1 cannot happen
    with pytest.raises(ImpossibleEvidenceError, match="impossible evidence"):
        variable_elimination(model, ["A"], {"B": 1})


def test_query_prob_scalar():
    net = random_net(9, n_vars=4)
    target = net.node_names[1]
    blanket = markov_blanket(net, [target])
    rng = np.random.default_rng(2)
    evidence = {
        n: net.variable(n).states[int(rng.integers(net.cardinality(n)))]
        for n in sorted(blanket)
    }
    expected = enumerate_posterior(net, [target], evidence)
    state = net.variable(target).states[0]
    assert query_prob(net, target, state, evidence) == pytest.approx(
        expected.get((state,), 0.0), abs=1e-9
    )


def test_query_prob_ignores_out_of_blanket_evidence():
    net = fig_shaped_net()
    p1 = query_prob(net, "network", 1, {"bitrate": 0, "streams": 1})
    p2 = query_prob(net, "network", 1, {"bitrate": 0, "streams": 1, "cpu": 0})
    assert p1 == pytest.approx(p2, abs=1e-12)
