"""Slow, obviously-correct reference implementations used to pin expected
values in the tests. Everything here is deliberate loop-and-dict code with no
shared machinery with the package internals."""

from __future__ import annotations

import itertools
import math


def enumerate_posterior(model, targets, evidence=None):
    """P(targets | evidence) by full joint enumeration.

    Returns a dict mapping tuples of state labels (targets in model schema
    order) to probabilities. Raises ValueError when the evidence has zero
    probability.
    """
    evidence = dict(evidence or {})
    names = list(model.node_names)
    target_list = [n for n in names if n in set(targets)]
    states = {n: list(model.variable(n).states) for n in names}

    weights: dict[tuple, float] = {}
    for combo in itertools.product(*(states[n] for n in names)):
        assignment = dict(zip(names, combo))
        if any(assignment[k] != v for k, v in evidence.items()):
            continue
        p = 1.0
        for n in names:
            cpt = model.cpts[n]
            idx = tuple(
                states[q].index(assignment[q]) for q in cpt.parents
            ) + (states[n].index(assignment[n]),)
            p *= float(cpt.table[idx])
        key = tuple(assignment[t] for t in target_list)
        weights[key] = weights.get(key, 0.0) + p
    total = sum(weights.values())
    if total <= 0.0:
        raise ValueError("evidence has zero probability")
    return {k: v / total for k, v in weights.items()}


def loglik_by_counting(rows, parents_of):
    """Log-likelihood oracle: explicit nested-dict frequency counting.

    ``rows`` is a list of dicts; ``parents_of`` maps each variable to its
    parent tuple.
    """
    total = 0.0
    for var, parents in parents_of.items():
        joint: dict[tuple, int] = {}
        marg: dict[tuple, int] = {}
        for row in rows:
            pa = tuple(row[p] for p in parents)
            joint[pa + (row[var],)] = joint.get(pa + (row[var],), 0) + 1
            marg[pa] = marg.get(pa, 0) + 1
        for row in rows:
            pa = tuple(row[p] for p in parents)
            total += math.log(joint[pa + (row[var],)] / marg[pa])
    return total


def best_assignment_welfare(curves, n_clients):
    """Exhaustive-search oracle for client assignment.

    ``curves[d][k]`` is the expected fulfillment of device d running k
    clients (k from 1). Welfare of an assignment is the sum over devices of
    the running-value prefix sum: each client contributes the value at the
    count it brought the device to. Returns the maximum welfare over all
    assignments (compositions of n_clients over the devices).
    """
    n_dev = len(curves)

    def welfare(counts):
        w = 0.0
        for d, k in enumerate(counts):
            for j in range(1, k + 1):
                w += curves[d][j - 1]
        return w

    best = None
    for counts in itertools.product(range(n_clients + 1), repeat=n_dev):
        if sum(counts) != n_clients:
            continue
        if any(k > len(curves[d]) for d, k in enumerate(counts)):
            continue
        w = welfare(counts)
        if best is None or w > best:
            best = w
    return best
