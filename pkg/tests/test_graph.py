import json

import numpy as np
import pytest

from fairdistrict.ensemble.graph import (
    GraphError,
    GraphInstance,
    canonical_key,
    districting_problems,
    grid_graph,
)


def test_two_by_two_uniform():
    g = grid_graph(2, 2)
    assert g.n == 4 and len(g.edges) == 4
    assert len({n.pop for n in g.nodes}) == 1
    assert g.problems() == []


def test_gradient_is_monotone_along_rows():
    g = grid_graph(3, 5, "gradient", share=0.5, spread=0.6)
    for r in range(3):
        shares = [g.nodes[r * 5 + c].votes["base"][0] for c in range(5)]
        assert shares == sorted(shares) and shares[0] < shares[-1]


def test_clustered_reproducible_and_seeded():
    a = grid_graph(5, 5, "clustered", seed=9).dumps()
    assert a == grid_graph(5, 5, "clustered", seed=9).dumps()
    assert a != grid_graph(5, 5, "clustered", seed=10).dumps()


def test_json_roundtrip():
    g = grid_graph(3, 4, "clustered", seed=2, m=3, epsilon="1/20")
    back = GraphInstance.from_json(json.loads(g.dumps()))
    assert back == g and back.dumps() == g.dumps()


def test_perimeter_bookkeeping():
    g = grid_graph(3, 3)
    corner, middle = g.nodes[0], g.nodes[4]
    assert corner.exterior == 2 and middle.exterior == 0


def test_disconnected_graph_rejected():
    data = json.loads(grid_graph(2, 2).dumps())
    data["edges"] = [e for e in data["edges"] if {e["a"], e["b"]} == {"0", "1"}]
    g = GraphInstance.from_json(data)
    assert "graph is not connected" in g.problems()
    with pytest.raises(GraphError):
        g.validate()


def test_malformed_json_rejected():
    with pytest.raises(GraphError):
        GraphInstance.from_json({"m": 2, "nodes": [{"id": 1}], "edges": []})
    with pytest.raises(GraphError):
        GraphInstance.from_json({"m": 2, "nodes": [], "edges": [{"a": "x", "b": "y"}]})


def test_shared_length_checked():
    data = json.loads(grid_graph(1, 2).dumps())
    data["edges"][0]["shared"] = 5.0
    assert GraphInstance.from_json(data).problems()


def test_districting_problems():
    g = grid_graph(2, 2, m=2, epsilon=0)
    assert districting_problems(g, np.array([0, 0, 1, 1])) == []
    assert any("contiguous" in p for p in districting_problems(g, np.array([0, 1, 1, 0])))
    assert any("population" in p for p in districting_problems(g, np.array([0, 1, 1, 1])))


def test_canonical_key():
    assert canonical_key([2, 2, 0, 1]) == canonical_key([0, 0, 1, 2]) == (0, 0, 1, 2)
