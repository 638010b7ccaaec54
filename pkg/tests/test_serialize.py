"""Model documents: lossless round trips and import validation."""

import json

import numpy as np
import pytest

from acisim.bayes import (
    Dag,
    DiscreteBatch,
    VariableSpec,
    from_document,
    hill_climb,
    load_model,
    mle_fit,
    save_model,
    to_document,
)
from acisim.errors import NotNormalizedError


def sample_model(seed=0):
    rng = np.random.default_rng(seed)
    names = ["a", "b", "c"]
    schema = [VariableSpec("a", (0, 1)), VariableSpec("b", ("x", "y", "z")), VariableSpec("c", (False, True))]
    rows = []
    for _ in range(60):
        a = int(rng.integers(2))
        b = "xyz"[min(2, a + int(rng.integers(2)))]
        c = bool((a + ("xyz".index(b))) % 2)
        rows.append({"a": a, "b": b, "c": c})
    batch = DiscreteBatch.from_rows(schema, rows)
    return mle_fit(hill_climb(batch), batch, smoothing=0.5)


def test_round_trip_is_extensional_identity(tmp_path):
    model = sample_model()
    path = tmp_path / "model.json"
    save_model(model, path)
    back = load_model(path)
    assert back.variables == model.variables
    assert back.dag.edges == model.dag.edges
    assert back.sample_weight == model.sample_weight
    for name in model.node_names:
        np.testing.assert_array_equal(back.cpts[name].table, model.cpts[name].table)
    # byte-identical re-export
    save_model(back, tmp_path / "again.json")
    assert (tmp_path / "again.json").read_bytes() == path.read_bytes()


def test_awkward_floats_survive():
    model = sample_model(3)
    doc = json.loads(json.dumps(to_document(model)))
    back = from_document(doc)
    for name in model.node_names:
        np.testing.assert_array_equal(back.cpts[name].table, model.cpts[name].table)


def test_tampered_row_rejected(tmp_path):
    model = sample_model()
    doc = to_document(model)
    doc["cpts"]["a"]["table"][0] += 0.01
    with pytest.raises(NotNormalizedError, match="CPT row not normalized"):
        from_document(doc)


def test_state_label_types_survive(tmp_path):
    model = sample_model()
    path = tmp_path / "m.json"
    save_model(model, path)
    back = load_model(path)
    assert back.variable("a").states == (0, 1)
    assert back.variable("b").states == ("x", "y", "z")
    assert back.variable("c").states == (False, True)


def test_wrong_format_rejected():
    with pytest.raises(ValueError, match="not a model document"):
        from_document({"format": "something-else"})
