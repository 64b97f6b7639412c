"""Exhaustive enumeration of valid districtings for small graphs.

Districts are built as bitmasks. At each level the district holding the lowest
unassigned node is grown by connected extension (each connected set is
produced once, by the usual include/forbid branching) and the search recurses
on the rest. Branches are pruned when some component of the remaining nodes
that must stay outside the current district is too small to be a district.
"""

from __future__ import annotations

import math

import numpy as np

from .graph import GraphInstance

MAX_NODES = 64


def _grow(nbr: list[int], seed: int, mask: int) -> int:
    seen = frontier = seed
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            f ^= low
            nxt |= nbr[low.bit_length() - 1]
        nxt &= mask & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def _pop(pops: list[int], mask: int) -> int:
    s = 0
    while mask:
        low = mask & -mask
        mask ^= low
        s += pops[low.bit_length() - 1]
    return s


def enumerate_district_masks(g: GraphInstance) -> list[tuple[int, ...]]:
    """Every valid districting as a tuple of node bitmasks ordered by lowest node."""
    if g.n > MAX_NODES:
        raise ValueError(f"enumeration is limited to {MAX_NODES} nodes, got {g.n}")
    lo_f, hi_f = g.pop_bounds()
    lo, hi = math.ceil(lo_f), math.floor(hi_f)
    nbr = [sum(1 << w for w in g.adjacency[u]) for u in range(g.n)]
    pops = [node.pop for node in g.nodes]
    if len(set(pops)) == 1 and pops[0] > 0:
        unit = pops[0]

        def pop_of(mask: int) -> int:
            return unit * mask.bit_count()
    else:

        def pop_of(mask: int) -> int:
            return _pop(pops, mask)

    def feasible(rest: int, forbidden: int) -> bool:
        f = forbidden
        while f:
            comp = _grow(nbr, f & -f, rest)
            if pop_of(comp) < lo:
                return False
            f &= ~comp
        return True

    out: list[tuple[int, ...]] = []

    def level(region: int, k: int, prefix: tuple[int, ...]) -> None:
        root = region & -region
        if k == 1:
            if lo <= pop_of(region) <= hi and _grow(nbr, root, region) == region:
                out.append(prefix + (region,))
            return

        def extend(cur: int, p: int, ext: int, forbidden: int) -> None:
            if p >= lo:
                rest = region & ~cur
                if feasible(rest, rest):
                    level(rest, k - 1, prefix + (cur,))
            while ext:
                v = ext & -ext
                ext ^= v
                b = v.bit_length() - 1
                if p + pops[b] <= hi:
                    nc = cur | v
                    extend(nc, p + pops[b], (ext | nbr[b]) & region & ~nc & ~forbidden, forbidden)
                forbidden |= v
                if not feasible(region & ~cur, forbidden):
                    return

        r = root.bit_length() - 1
        extend(root, pops[r], nbr[r] & region, 0)

    level((1 << g.n) - 1, g.m, ())
    return out


def masks_to_assignments(masks: list[tuple[int, ...]], n: int) -> np.ndarray:
    out = np.zeros((len(masks), n), dtype=np.int16)
    for row, districting in enumerate(masks):
        for label, mask in enumerate(districting):
            while mask:
                low = mask & -mask
                mask ^= low
                out[row, low.bit_length() - 1] = label
    return out


def enumerate_districtings(g: GraphInstance) -> np.ndarray:
    """All valid districtings as an array of canonical label vectors."""
    return masks_to_assignments(enumerate_district_masks(g), g.n)
