"""Precinct adjacency graphs: the discrete state the ensemble runs on."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterable, Mapping

import numpy as np

from ..intervals import format_fraction, to_fraction

Votes = tuple[Fraction, Fraction]

DEFAULT_EPSILON = Fraction(2, 100)
DEFAULT_DATASET = "base"
GRID_PATTERNS = ("uniform", "gradient", "clustered")


class GraphError(ValueError):
    """Malformed or invalid graph instance."""


@dataclass(frozen=True)
class Node:
    id: str
    pop: int
    area: float
    perimeter: float
    exterior: float
    votes: Mapping[str, Votes]


@dataclass(frozen=True)
class GraphInstance:
    nodes: tuple[Node, ...]
    edges: tuple[tuple[int, int, float], ...]
    m: int
    epsilon: Fraction = DEFAULT_EPSILON
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for a, b, _ in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(x)) for x in adj))

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def datasets(self) -> list[str]:
        names: list[str] = []
        for node in self.nodes:
            for name in node.votes:
                if name not in names:
                    names.append(name)
        return names

    @property
    def total_pop(self) -> int:
        return sum(node.pop for node in self.nodes)

    def pop_bounds(self) -> tuple[Fraction, Fraction]:
        """Allowed district population range, ideal * (1 -/+ epsilon)."""
        ideal = Fraction(self.total_pop, self.m)
        return ideal * (1 - self.epsilon), ideal * (1 + self.epsilon)

    def vote_columns(self, dataset: str) -> tuple[list[Fraction], list[Fraction]]:
        try:
            pairs = [node.votes[dataset] for node in self.nodes]
        except KeyError:
            raise GraphError(f"dataset {dataset!r} missing on some node") from None
        return [p[0] for p in pairs], [p[1] for p in pairs]

    def with_dataset(self, name: str, votes: list[Votes]) -> "GraphInstance":
        nodes = tuple(replace(node, votes={**node.votes, name: v}) for node, v in zip(self.nodes, votes))
        return replace(self, nodes=nodes)

    def is_connected(self, members: Iterable[int] | None = None) -> bool:
        nodes = set(range(self.n)) if members is None else set(members)
        if not nodes:
            return False
        start = next(iter(nodes))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in self.adjacency[u]:
                if w in nodes and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(nodes)

    def problems(self) -> list[str]:
        out = []
        if self.m < 1:
            out.append("m must be positive")
        if not 0 <= self.epsilon < 1:
            out.append("epsilon must lie in [0, 1)")
        if self.n == 0:
            out.append("graph has no nodes")
            return out
        if not self.is_connected():
            out.append("graph is not connected")
        shared_sum = [0.0] * self.n
        for a, b, shared in self.edges:
            if a == b:
                out.append(f"self-loop at node {self.nodes[a].id}")
            if shared < 0 or shared > min(self.nodes[a].perimeter, self.nodes[b].perimeter) + 1e-9:
                out.append(f"edge {self.nodes[a].id}-{self.nodes[b].id} shared length {shared} out of range")
            shared_sum[a] += shared
            shared_sum[b] += shared
        for k, node in enumerate(self.nodes):
            if node.pop < 0 or node.area < 0 or node.perimeter < 0 or node.exterior < 0:
                out.append(f"node {node.id} has a negative attribute")
            if shared_sum[k] + node.exterior > node.perimeter * (1 + 1e-9) + 1e-9:
                out.append(f"node {node.id} perimeter is smaller than its boundary pieces")
        return out

    def validate(self) -> "GraphInstance":
        problems = self.problems()
        if problems:
            raise GraphError("; ".join(problems))
        return self

    def to_json(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "epsilon": format_fraction(self.epsilon),
            "nodes": [
                {
                    "id": node.id,
                    "pop": node.pop,
                    "area": node.area,
                    "perimeter": node.perimeter,
                    "exterior": node.exterior,
                    "votes": {
                        name: {"1": _vote_json(v[0]), "2": _vote_json(v[1])} for name, v in node.votes.items()
                    },
                }
                for node in self.nodes
            ],
            "edges": [{"a": self.nodes[a].id, "b": self.nodes[b].id, "shared": s} for a, b, s in self.edges],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "GraphInstance":
        try:
            index: dict[str, int] = {}
            nodes = []
            for k, raw in enumerate(data["nodes"]):
                node_id = str(raw["id"])
                if node_id in index:
                    raise GraphError(f"duplicate node id {node_id}")
                index[node_id] = k
                votes = {name: (_vote(v["1"]), _vote(v["2"])) for name, v in raw.get("votes", {}).items()}
                nodes.append(
                    Node(
                        id=node_id,
                        pop=int(raw["pop"]),
                        area=float(raw["area"]),
                        perimeter=float(raw["perimeter"]),
                        exterior=float(raw.get("exterior", 0.0)),
                        votes=votes,
                    )
                )
            edges = []
            for raw in data["edges"]:
                a, b = index[str(raw["a"])], index[str(raw["b"])]
                edges.append((min(a, b), max(a, b), float(raw.get("shared", 0.0))))
            eps = to_fraction(data["epsilon"]) if "epsilon" in data else DEFAULT_EPSILON
            return cls(tuple(nodes), tuple(edges), int(data["m"]), eps)
        except GraphError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed graph JSON: {exc!r}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"


def _vote(x: Any) -> Fraction:
    v = to_fraction(x)
    if v < 0:
        raise GraphError(f"negative vote count {v}")
    return v


def _vote_json(v: Fraction) -> int | str:
    return v.numerator if v.denominator == 1 else format_fraction(v)


def grid_graph(
    rows: int,
    cols: int,
    pattern: str = "uniform",
    seed: int = 0,
    *,
    m: int = 2,
    epsilon: Fraction | str = DEFAULT_EPSILON,
    pop: int = 100,
    share: float = 0.5,
    spread: float = 0.4,
    blobs: int = 3,
    dataset: str = DEFAULT_DATASET,
) -> GraphInstance:
    """Unit-square grid with a planted party-1 vote share field.

    ``uniform`` gives every cell ``share``; ``gradient`` runs linearly from
    ``share - spread/2`` in the first column to ``share + spread/2`` in the last;
    ``clustered`` adds Gaussian blobs of party-1 support at seeded centers on top
    of ``share - spread/2``. Votes are integers summing to ``pop`` per cell.
    """
    if rows < 1 or cols < 1:
        raise GraphError("grid needs at least one row and one column")
    if pattern not in GRID_PATTERNS:
        raise GraphError(f"unknown pattern {pattern!r}; choose from {GRID_PATTERNS}")
    rng = np.random.Generator(np.random.PCG64(seed))
    if pattern == "uniform":
        field_ = np.full((rows, cols), share)
    elif pattern == "gradient":
        ramp = np.linspace(-0.5, 0.5, cols) if cols > 1 else np.zeros(1)
        field_ = np.tile(share + spread * ramp, (rows, 1))
    else:
        rr, cc = np.mgrid[0:rows, 0:cols]
        bump = np.zeros((rows, cols))
        sigma = max(rows, cols) / 5
        for _ in range(blobs):
            r0, c0 = rng.uniform(0, rows - 1), rng.uniform(0, cols - 1)
            bump += np.exp(-((rr - r0) ** 2 + (cc - c0) ** 2) / (2 * sigma**2))
        field_ = share - spread / 2 + spread * bump / max(bump.max(), 1e-12)
    field_ = np.clip(field_, 0.0, 1.0)

    nodes = []
    for r in range(rows):
        for c in range(cols):
            v1 = int(round(float(field_[r, c]) * pop))
            exterior = float((r == 0) + (r == rows - 1) + (c == 0) + (c == cols - 1))
            nodes.append(
                Node(
                    id=str(r * cols + c),
                    pop=pop,
                    area=1.0,
                    perimeter=4.0,
                    exterior=exterior,
                    votes={dataset: (Fraction(v1), Fraction(pop - v1))},
                )
            )
    edges = []
    for r in range(rows):
        for c in range(cols):
            k = r * cols + c
            if c + 1 < cols:
                edges.append((k, k + 1, 1.0))
            if r + 1 < rows:
                edges.append((k, k + cols, 1.0))
    return GraphInstance(tuple(nodes), tuple(edges), m, to_fraction(epsilon))


def district_members(assignment: np.ndarray, m: int) -> list[list[int]]:
    members: list[list[int]] = [[] for _ in range(m)]
    for node, label in enumerate(assignment.tolist()):
        members[label].append(node)
    return members


def is_valid_districting(g: GraphInstance, assignment: np.ndarray) -> bool:
    return not districting_problems(g, assignment)


def districting_problems(g: GraphInstance, assignment: np.ndarray) -> list[str]:
    if len(assignment) != g.n:
        return ["assignment length does not match node count"]
    labels = set(assignment.tolist())
    if labels != set(range(g.m)):
        return [f"labels {sorted(labels)} are not 0..{g.m - 1}"]
    lo, hi = g.pop_bounds()
    out = []
    for label, members in enumerate(district_members(assignment, g.m)):
        pop = sum(g.nodes[k].pop for k in members)
        if not lo <= pop <= hi:
            out.append(f"district {label} population {pop} outside [{float(lo):g}, {float(hi):g}]")
        if not g.is_connected(members):
            out.append(f"district {label} is not contiguous")
    return out


def canonical_key(assignment: np.ndarray | list[int]) -> tuple[int, ...]:
    """Relabel districts in order of first appearance so equal partitions compare equal."""
    seen: dict[int, int] = {}
    out = []
    for label in list(assignment):
        if label not in seen:
            seen[label] = len(seen)
        out.append(seen[label])
    return tuple(out)


__all__ = [
    "GraphError",
    "GraphInstance",
    "Node",
    "grid_graph",
    "canonical_key",
    "districting_problems",
    "is_valid_districting",
    "district_members",
]
