"""Brute-force ground truth on discretized instances.

An :class:`AtomInstance` slices ``[0,1]`` into ``n = m*q`` equal atoms with a
constant support value on each. Districts made of whole atoms are only a subset
of all districts, so these enumerations give lower bounds on the continuous
extremes in general; they coincide with the continuous values when every
atom value is 0, 1/2 or 1 and ``q`` is even (see ``exact_on_grid``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .intervals import HALF, ONE, ZERO, Density, Instance, RationalLike, to_fraction

MAX_ATOMS = 14


class EnumerationLimitError(ValueError):
    pass


@dataclass(frozen=True)
class AtomInstance:
    """``values_1[k]`` is party 1's belief of its own support on atom ``k``;
    ``values_2`` likewise for party 2."""

    m: int
    q: int
    values_1: tuple[Fraction, ...]
    values_2: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.m < 1 or self.q < 1:
            raise ValueError("need m >= 1 and q >= 1")
        for vals in (self.values_1, self.values_2):
            if len(vals) != self.n:
                raise ValueError(f"expected {self.n} atom values, got {len(vals)}")
            if any(not ZERO <= v <= ONE for v in vals):
                raise ValueError("atom values must lie in [0,1]")

    @classmethod
    def of(cls, m: int, values_1: Sequence[RationalLike], values_2: Sequence[RationalLike] | None = None):
        v1 = tuple(to_fraction(v) for v in values_1)
        v2 = tuple(ONE - v for v in v1) if values_2 is None else tuple(to_fraction(v) for v in values_2)
        if len(v1) % m:
            raise ValueError(f"{len(v1)} atoms cannot be split into {m} equal districts")
        return cls(m, len(v1) // m, v1, v2)

    @property
    def n(self) -> int:
        return self.m * self.q

    def values(self, party: int) -> tuple[Fraction, ...]:
        return self.values_1 if party == 1 else self.values_2

    def to_instance(self) -> Instance:
        def density(vals):
            return Density(tuple((Fraction(k, self.n), Fraction(k + 1, self.n), v) for k, v in enumerate(vals)))

        return Instance(self.m, density(self.values_1), density(self.values_2))

    @property
    def exact_on_grid(self) -> bool:
        """Whether atom-level extremes provably equal the continuous ones."""
        allowed = {ZERO, HALF, ONE}
        return self.q % 2 == 0 and set(self.values_1) <= allowed and set(self.values_2) <= allowed


def from_instance(inst: Instance, q: int) -> AtomInstance:
    """Discretize an instance whose breakpoints all lie on the ``1/(m*q)`` grid."""
    n = inst.m * q
    vals = []
    for f in (inst.density_1, inst.density_2):
        for b in f.breakpoints():
            if (b * n).denominator != 1:
                raise ValueError(f"breakpoint {b} is not on the 1/{n} grid")
        vals.append(tuple(f.value_at(Fraction(k, n)) for k in range(n)))
    return AtomInstance(inst.m, q, vals[0], vals[1])


def _check_bound(a: AtomInstance) -> None:
    if a.n > MAX_ATOMS:
        raise EnumerationLimitError(f"{a.n} atoms exceeds the enumeration bound of {MAX_ATOMS}")


def _scaled(vals: Sequence[Fraction]) -> tuple[list[int], int]:
    scale = math.lcm(*(v.denominator for v in vals))
    return [int(v * scale) for v in vals], scale


def _block_partitions(atoms: tuple[int, ...], q: int):
    # each unordered partition once: the block holding the smallest atom is chosen first
    if not atoms:
        yield ()
        return
    first, rest = atoms[0], atoms[1:]
    for others in itertools.combinations(rest, q - 1):
        block = (first,) + others
        remaining = tuple(x for x in rest if x not in others)
        for tail in _block_partitions(remaining, q):
            yield (block,) + tail


def brute_minmax_seats(a: AtomInstance, evaluator: int) -> tuple[int, int]:
    """Exact fewest/most whole-atom districts ``evaluator`` can win by its own beliefs.

    Ties go against the evaluator for the minimum and to it for the maximum.
    """
    _check_bound(a)
    vals, scale = _scaled(a.values(evaluator))
    half2 = a.q * scale  # twice the half-district support, in scaled units
    lo, hi = a.m, 0
    for blocks in _block_partitions(tuple(range(a.n)), a.q):
        sums = [2 * sum(vals[k] for k in b) for b in blocks]
        lo = min(lo, sum(1 for s in sums if s > half2))
        hi = max(hi, sum(1 for s in sums if s >= half2))
    return lo, hi


def brute_max_competitive(a: AtomInstance, i: int) -> int:
    """Largest ``k`` such that some ``k*q`` atoms hold exactly half their measure in support."""
    _check_bound(a)
    vals = a.values(i)
    best = 0
    # sums over subsets, built incrementally by lowest set bit
    sums = [ZERO] * (1 << a.n)
    sizes = [0] * (1 << a.n)
    for mask in range(1, 1 << a.n):
        low = mask & -mask
        k = low.bit_length() - 1
        prev = mask ^ low
        sums[mask] = sums[prev] + vals[k]
        sizes[mask] = sizes[prev] + 1
        size = sizes[mask]
        if size % a.q == 0 and 2 * sums[mask] == size:
            best = max(best, size // a.q)
    return best


def vertex_max_competitive_measure(f: Density) -> Fraction:
    """Largest competitive measure by enumerating LP vertices.

    Maximizing total taken length subject to zero net excess over ``value - 1/2``
    has an optimal vertex with at most one partially taken piece, so it suffices
    to try every set of whole pieces plus at most one partial piece.
    """
    pieces = [(hi - lo, v - HALF) for lo, hi, v in f.pieces]
    if len(pieces) > 16:
        raise EnumerationLimitError("too many density pieces for vertex enumeration")
    best = ZERO
    idx = range(len(pieces))
    for r in range(len(pieces) + 1):
        for whole in itertools.combinations(idx, r):
            excess = sum((pieces[k][0] * pieces[k][1] for k in whole), ZERO)
            length = sum((pieces[k][0] for k in whole), ZERO)
            if excess == 0:
                best = max(best, length)
            taken = set(whole)
            for p in idx:
                ell, g = pieces[p]
                if p in taken or g == 0:
                    continue
                x = -excess / g
                if ZERO <= x <= ell:
                    best = max(best, length + x)
    return best
