import numpy as np
import pytest

from fairdistrict.ensemble.chain import (
    InfeasibleSeedingError,
    _Draws,
    make_rng,
    random_spanning_tree,
    recom_step,
    run_chain,
    seed_districting,
)
from fairdistrict.ensemble.enumeration import enumerate_districtings
from fairdistrict.ensemble.graph import canonical_key, districting_problems, grid_graph


def test_two_by_two_steps_stay_in_the_two_splits():
    g = grid_graph(2, 2, m=2, epsilon="1/4")
    splits = {(0, 0, 1, 1), (0, 1, 0, 1)}
    draws = _Draws(make_rng(3))
    state = seed_districting(g, draws)
    for _ in range(50):
        state = recom_step(g, state, draws)
        assert canonical_key(state) in splits


@pytest.mark.parametrize("rows, cols, m, eps", [(4, 4, 2, "0"), (5, 5, 5, "1/5"), (6, 4, 3, "1/10")])
def test_every_state_is_valid(rows, cols, m, eps):
    g = grid_graph(rows, cols, "clustered", seed=1, m=m, epsilon=eps)
    run = run_chain(g, 300, 0, seed=rows * cols)
    assert all(districting_problems(g, s) == [] for s in run.states)


def test_four_by_four_reaches_every_balanced_bipartition():
    g = grid_graph(4, 4, m=2, epsilon=0)
    expected = {tuple(r) for r in enumerate_districtings(g).tolist()}
    assert len(expected) == 70
    visited = {canonical_key(s) for s in run_chain(g, 20000, 0, seed=2).states}
    assert visited == expected


def test_burn_in_and_determinism():
    g = grid_graph(5, 5, "gradient", m=5, epsilon="1/5")
    assert len(run_chain(g, 10, 10, seed=1).states) == 0
    a, b = run_chain(g, 200, 50, seed=7), run_chain(g, 200, 50, seed=7)
    assert a.states.shape == (150, 25)
    assert np.array_equal(a.states, b.states)
    assert list(a.sample_indices) == list(range(50, 200))
    assert not np.array_equal(a.states, run_chain(g, 200, 50, seed=8).states)
    with pytest.raises(ValueError):
        run_chain(g, 5, 10, seed=1)


def test_infeasible_seeding():
    g = grid_graph(1, 3, m=2, epsilon=0)
    with pytest.raises(InfeasibleSeedingError):
        run_chain(g, 5, 0, seed=0)


def test_spanning_tree_spans_region():
    g = grid_graph(4, 4)
    region = [0, 1, 2, 4, 5, 6, 8]
    root, parent = random_spanning_tree(g.adjacency, region, _Draws(make_rng(0)))
    assert set(parent) | {root} == set(region)
    assert all(parent[u] in g.adjacency[u] for u in parent)


def test_spanning_tree_is_uniform_on_a_cycle():
    # a 4-cycle has 4 spanning trees, one per omitted edge
    g = grid_graph(2, 2)
    draws = _Draws(make_rng(5))
    counts = {}
    for _ in range(4000):
        root, parent = random_spanning_tree(g.adjacency, [0, 1, 2, 3], draws)
        edges = frozenset(frozenset((u, p)) for u, p in parent.items())
        counts[edges] = counts.get(edges, 0) + 1
    assert len(counts) == 4
    assert all(abs(c / 4000 - 0.25) < 0.03 for c in counts.values())


def test_seats_support_matches_enumeration(grid6, grid6_enumeration):
    from fairdistrict.ensemble.metrics import BatchEvaluator

    ev = BatchEvaluator(grid6)
    full = set(ev.seats(grid6_enumeration, "base")[0].tolist())
    run = run_chain(grid6, 2000, 0, seed=11)
    sampled = set(ev.seats(run.states, "base")[0].tolist())
    assert sampled == full
