"""Partisan and compactness metrics for districtings.

Vote arithmetic is exact (integers or fractions). Floats appear only in the
reported efficiency gap and Polsby-Popper values.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import GraphInstance

COMPETITIVE_SHARE = Fraction(54, 100)

VotePair = tuple[int | Fraction, int | Fraction]


def district_winner(v1: int | Fraction, v2: int | Fraction) -> int:
    """Winning party of a district; an exact tie goes to party 2."""
    return 1 if v1 > v2 else 2


def efficiency_gap(districts: Sequence[VotePair]) -> float:
    """Signed efficiency gap; positive means party 1 wastes more votes.

    The winner wastes its votes above half the district total, the loser all
    of its votes. In an exactly tied district each side wastes half the votes,
    so ties add nothing to the gap (unlike seat counts, where party 2 takes them).
    """
    total = sum((v1 + v2 for v1, v2 in districts), 0)
    if total <= 0:
        raise ValueError("efficiency gap needs a positive vote total")
    net = 0  # twice (waste_1 - waste_2)
    for v1, v2 in districts:
        t = v1 + v2
        net += 2 * (v1 - v2) - t * _sign(v1 - v2)
    return float(Fraction(net) / (2 * total))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def competitive_count(districts: Sequence[VotePair], threshold: Fraction = COMPETITIVE_SHARE) -> int:
    """Districts whose leading party holds at most ``threshold`` of the two-party vote."""
    count = 0
    for v1, v2 in districts:
        t = v1 + v2
        if t > 0 and max(v1, v2) <= threshold * t:
            count += 1
    return count


def polsby_popper(assignment: Sequence[int], g: GraphInstance) -> tuple[list[float], float]:
    """Per-district ``4*pi*area/perimeter**2`` and their mean."""
    area = [0.0] * g.m
    perim = [0.0] * g.m
    for k, node in enumerate(g.nodes):
        area[assignment[k]] += node.area
        perim[assignment[k]] += node.exterior
    for a, b, shared in g.edges:
        if assignment[a] != assignment[b]:
            perim[assignment[a]] += shared
            perim[assignment[b]] += shared
    scores = [4 * math.pi * area[d] / perim[d] ** 2 if perim[d] > 0 else 0.0 for d in range(g.m)]
    return scores, sum(scores) / g.m


def district_votes(assignment: Sequence[int], g: GraphInstance, dataset: str) -> list[tuple[Fraction, Fraction]]:
    sums = [[Fraction(0), Fraction(0)] for _ in range(g.m)]
    for k, node in enumerate(g.nodes):
        v1, v2 = node.votes[dataset]
        sums[assignment[k]][0] += v1
        sums[assignment[k]][1] += v2
    return [(a, b) for a, b in sums]


def seats(districts: Sequence[VotePair], party: int) -> int:
    return sum(1 for v1, v2 in districts if district_winner(v1, v2) == party)


class BatchEvaluator:
    """Vectorized metrics for many districtings of one graph.

    Vote columns of each dataset are scaled to a common integer denominator so
    district sums and comparisons stay exact in int64 (or Python ints when the
    scaled sums could overflow).
    """

    def __init__(self, g: GraphInstance):
        self.g = g
        self.area = np.array([node.area for node in g.nodes])
        self.exterior = np.array([node.exterior for node in g.nodes])
        self.edge_a = np.array([a for a, _, _ in g.edges], dtype=np.int64)
        self.edge_b = np.array([b for _, b, _ in g.edges], dtype=np.int64)
        self.shared = np.array([s for _, _, s in g.edges])
        self._votes: dict[str, tuple[np.ndarray, np.ndarray]] = {}

    def scaled_votes(self, dataset: str) -> tuple[np.ndarray, np.ndarray]:
        if dataset not in self._votes:
            c1, c2 = self.g.vote_columns(dataset)
            scale = math.lcm(*(v.denominator for v in c1 + c2))
            s1 = [int(v * scale) for v in c1]
            s2 = [int(v * scale) for v in c2]
            dtype = np.int64 if max(sum(s1), sum(s2), 1) < 2**60 else object
            self._votes[dataset] = (np.array(s1, dtype=dtype), np.array(s2, dtype=dtype))
        return self._votes[dataset]

    def _district_sums(self, states: np.ndarray, col: np.ndarray) -> np.ndarray:
        count, m = states.shape[0], self.g.m
        out = np.zeros((count, m), dtype=col.dtype)
        rows = np.repeat(np.arange(count), states.shape[1])
        np.add.at(out, (rows, states.ravel().astype(np.int64)), np.tile(col, count))
        return out

    def district_vote_sums(self, states: np.ndarray, dataset: str) -> tuple[np.ndarray, np.ndarray]:
        s1, s2 = self.scaled_votes(dataset)
        return self._district_sums(states, s1), self._district_sums(states, s2)

    def seats(self, states: np.ndarray, dataset: str) -> tuple[np.ndarray, np.ndarray]:
        """Seats of parties 1 and 2 per state; ties count for party 2."""
        d1, d2 = self.district_vote_sums(states, dataset)
        won_1 = (d1 > d2).sum(axis=1).astype(np.int64)
        return won_1, self.g.m - won_1

    def efficiency_gap(self, states: np.ndarray, dataset: str) -> np.ndarray:
        d1, d2 = self.district_vote_sums(states, dataset)
        t = d1 + d2
        net = (2 * (d1 - d2) - t * np.sign(d1 - d2)).sum(axis=1)
        total = t.sum(axis=1)
        return np.array([float(Fraction(int(n), 2 * int(tt))) for n, tt in zip(net, total)])

    def competitive(self, states: np.ndarray, dataset: str, threshold: Fraction = COMPETITIVE_SHARE) -> np.ndarray:
        d1, d2 = self.district_vote_sums(states, dataset)
        t = d1 + d2
        ok = (np.maximum(d1, d2) * threshold.denominator <= t * threshold.numerator) & (t > 0)
        return ok.sum(axis=1).astype(np.int64)

    def polsby_popper(self, states: np.ndarray) -> np.ndarray:
        """Per-district scores, shape (states, m)."""
        count, m = states.shape[0], self.g.m
        idx = states.astype(np.int64)
        rows = np.arange(count)[:, None]
        area = np.zeros((count, m))
        perim = np.zeros((count, m))
        np.add.at(area, (np.broadcast_to(rows, idx.shape), idx), self.area)
        np.add.at(perim, (np.broadcast_to(rows, idx.shape), idx), self.exterior)
        la, lb = idx[:, self.edge_a], idx[:, self.edge_b]
        cut = (la != lb) * self.shared
        erows = np.broadcast_to(rows, la.shape)
        np.add.at(perim, (erows, la), cut)
        np.add.at(perim, (erows, lb), cut)
        with np.errstate(divide="ignore", invalid="ignore"):
            scores = np.where(perim > 0, 4 * math.pi * area / perim**2, 0.0)
        return scores

    def pp_mean(self, states: np.ndarray) -> np.ndarray:
        return self.polsby_popper(states).sum(axis=1) / self.g.m
