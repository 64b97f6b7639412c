"""Recombination Markov chain over valid districtings."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import GraphInstance

MAX_TREE_DRAWS = 100
SEED_ATTEMPTS = 200
PRNG_NAME = "numpy.random.PCG64"


class InfeasibleSeedingError(RuntimeError):
    """No valid starting districting could be found."""


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


class _Draws:
    """Uniform integers from a generator, drawn in blocks to keep Python overhead low."""

    def __init__(self, rng: np.random.Generator, block: int = 4096):
        self.rng = rng
        self.block = block
        self.buf = rng.random(block)
        self.pos = 0

    def below(self, n: int) -> int:
        if self.pos == self.block:
            self.buf = self.rng.random(self.block)
            self.pos = 0
        u = self.buf[self.pos]
        self.pos += 1
        k = int(u * n)
        return k if k < n else n - 1


def random_spanning_tree(adjacency, region: list[int], draws: _Draws) -> tuple[int, dict[int, int]]:
    """Uniform spanning tree of the subgraph induced by ``region`` (Wilson's algorithm).

    Returns the root and a parent map covering every other region node.
    """
    members = set(region)
    nbrs = {u: [w for w in adjacency[u] if w in members] for u in region}
    root = region[draws.below(len(region))]
    in_tree = {root}
    parent: dict[int, int] = {}
    nxt: dict[int, int] = {}
    for start in region:
        u = start
        while u not in in_tree:
            choices = nbrs[u]
            nxt[u] = choices[draws.below(len(choices))]
            u = nxt[u]
        u = start
        while u not in in_tree:
            in_tree.add(u)
            parent[u] = nxt[u]
            u = nxt[u]
    return root, parent


def _subtree_pops(root: int, parent: dict[int, int], pops: list[int]) -> tuple[dict[int, int], dict[int, list[int]]]:
    children: dict[int, list[int]] = {}
    for u, p in parent.items():
        children.setdefault(p, []).append(u)
    order = [root]
    for u in order:
        order.extend(children.get(u, ()))
    sub = {u: pops[u] for u in order}
    for u in reversed(order):
        if u != root:
            sub[parent[u]] += sub[u]
    return sub, children


def _descendants(u: int, children: dict[int, list[int]]) -> list[int]:
    out = [u]
    for w in out:
        out.extend(children.get(w, ()))
    return out


def split_region(
    g: GraphInstance,
    region: list[int],
    draws: _Draws,
    bounds_a: tuple[Fraction, Fraction],
    bounds_b: tuple[Fraction, Fraction],
    max_draws: int = MAX_TREE_DRAWS,
) -> tuple[list[int], list[int]] | None:
    """Cut a random spanning tree of ``region`` into halves with populations in
    ``bounds_a`` and ``bounds_b``. Returns ``None`` after ``max_draws`` failed trees."""
    pops = [node.pop for node in g.nodes]
    total = sum(pops[u] for u in region)
    (lo_a, hi_a), (lo_b, hi_b) = bounds_a, bounds_b
    for _ in range(max_draws):
        root, parent = random_spanning_tree(g.adjacency, region, draws)
        sub, children = _subtree_pops(root, parent, pops)
        # orientation: the subtree below the cut edge becomes side a or side b
        options = []
        for u in region:
            if u == root:
                continue
            s, rest = sub[u], total - sub[u]
            if lo_a <= s <= hi_a and lo_b <= rest <= hi_b:
                options.append((u, True))
            if lo_b <= s <= hi_b and lo_a <= rest <= hi_a:
                options.append((u, False))
        if options:
            u, below_is_a = options[draws.below(len(options))]
            below = _descendants(u, children)
            below_set = set(below)
            above = [w for w in region if w not in below_set]
            return (below, above) if below_is_a else (above, below)
    return None


def recom_step(g: GraphInstance, assignment: np.ndarray, draws: _Draws) -> np.ndarray:
    """One recombination move; returns ``assignment`` itself on a self-loop."""
    labels = assignment
    cut_edges = [(a, b) for a, b, _ in g.edges if labels[a] != labels[b]]
    if not cut_edges:
        return assignment
    a, b = cut_edges[draws.below(len(cut_edges))]
    la, lb = int(labels[a]), int(labels[b])
    region = [u for u in range(g.n) if labels[u] == la or labels[u] == lb]
    bounds = g.pop_bounds()
    split = split_region(g, region, draws, bounds, bounds)
    if split is None:
        return assignment
    side_a, side_b = split
    out = assignment.copy()
    # the half holding node a keeps a's label
    if a in set(side_b):
        side_a, side_b = side_b, side_a
    out[side_a] = la
    out[side_b] = lb
    return out


def seed_districting(g: GraphInstance, draws: _Draws, attempts: int = SEED_ATTEMPTS) -> np.ndarray:
    """Random valid districting by recursive bisection along spanning trees."""
    lo, hi = g.pop_bounds()
    for _ in range(attempts):
        parts = _bisect(g, list(range(g.n)), g.m, draws, lo, hi)
        if parts is not None:
            out = np.zeros(g.n, dtype=np.int16)
            for label, part in enumerate(sorted(parts, key=min)):
                out[part] = label
            return out
    raise InfeasibleSeedingError(
        f"no valid {g.m}-districting found after {attempts} recursive-bisection attempts"
    )


def _bisect(g, region, k, draws, lo, hi):
    if k == 1:
        return [region]
    k_a = k // 2
    k_b = k - k_a
    split = split_region(g, region, draws, (k_a * lo, k_a * hi), (k_b * lo, k_b * hi), max_draws=20)
    if split is None:
        return None
    left = _bisect(g, split[0], k_a, draws, lo, hi)
    if left is None:
        return None
    right = _bisect(g, split[1], k_b, draws, lo, hi)
    if right is None:
        return None
    return left + right


@dataclass(frozen=True)
class ChainRun:
    """States visited by a chain; ``states[k]`` is chain step ``start + k``."""

    states: np.ndarray
    start: int
    seed: int
    accepted: int

    @property
    def sample_indices(self) -> range:
        return range(self.start, self.start + len(self.states))


def run_chain(g: GraphInstance, steps: int, burn_in: int, seed: int) -> ChainRun:
    """Run ``steps`` chain states (the seed districting is state 0) and keep those
    with index at least ``burn_in``."""
    if burn_in < 0 or steps < burn_in:
        raise ValueError("need steps >= burn_in >= 0")
    draws = _Draws(make_rng(seed))
    kept = np.zeros((steps - burn_in, g.n), dtype=np.int16)
    if steps == 0:
        return ChainRun(kept, burn_in, seed, 0)
    state = seed_districting(g, draws)
    accepted = 0
    for t in range(steps):
        if t > 0:
            nxt = recom_step(g, state, draws)
            accepted += nxt is not state
            state = nxt
        if t >= burn_in:
            kept[t - burn_in] = state
    return ChainRun(kept, burn_in, seed, accepted)
