"""Seat counts, battlegrounds and geometric targets in the state-cutting model."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cutting import austin_cut, cut_into_districts, iterated_cut
from .intervals import (
    EMPTY,
    HALF,
    ZERO,
    District,
    Instance,
    _canonical,
    integrate,
    other,
    union_all,
)


class PartitionError(ValueError):
    """Raised when a labeled partition is not a full m-partition of [0,1]."""


@dataclass(frozen=True)
class LabeledPartition:
    """Districts together with a tie-break winner for each district (by index)."""

    districts: tuple[District, ...]
    tiebreak: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.districts) != len(self.tiebreak):
            raise ValueError("need exactly one tie-break label per district")
        for p in self.tiebreak:
            if p not in (1, 2):
                raise ValueError(f"tie-break label must be 1 or 2, got {p!r}")

    @classmethod
    def build(cls, parts: Sequence[tuple[District, int]]) -> "LabeledPartition":
        return cls(tuple(d for d, _ in parts), tuple(p for _, p in parts))

    def __len__(self) -> int:
        return len(self.districts)

    def __add__(self, other: "LabeledPartition") -> "LabeledPartition":
        return LabeledPartition(self.districts + other.districts, self.tiebreak + other.tiebreak)

    @property
    def covered(self) -> District:
        return union_all(self.districts)

    def partition_problems(self, m: int, full: bool = True) -> list[str]:
        """Violations of the m-partition axioms; ``full=False`` skips the cover check."""
        problems = []
        unit = Fraction(1, m)
        for k, d in enumerate(self.districts):
            if d.measure != unit:
                problems.append(f"district {k} has measure {d.measure}, expected {unit}")
        total = sum((d.measure for d in self.districts), ZERO)
        covered = self.covered
        if covered.measure != total:
            problems.append("districts overlap in positive measure")
        if full and covered != District.full():
            problems.append(f"districts cover {covered}, not [0, 1]")
        return problems

    def is_full(self, m: int) -> bool:
        return len(self.districts) == m and not self.partition_problems(m)

    def to_json(self) -> list[dict]:
        return [{"intervals": d.to_json(), "tiebreak": t} for d, t in zip(self.districts, self.tiebreak)]


@dataclass(frozen=True)
class Battleground:
    """Largest competitive district worth a whole number of seats."""

    m_i: int
    x_i: District


@dataclass(frozen=True)
class PartyReport:
    party: int
    min_seats: int
    max_seats: int
    target: int
    achieved: int
    satisfied: bool

    def to_json(self) -> dict:
        return {
            "party": self.party,
            "min": self.min_seats,
            "max": self.max_seats,
            "target": self.target,
            "achieved": self.achieved,
            "satisfied": self.satisfied,
        }


@dataclass(frozen=True)
class TargetReport:
    parties: tuple[PartyReport, PartyReport]

    @property
    def satisfied(self) -> bool:
        return all(p.satisfied for p in self.parties)

    def __getitem__(self, party: int) -> PartyReport:
        return self.parties[party - 1]

    def to_json(self) -> list[dict]:
        return [p.to_json() for p in self.parties]


def is_competitive(inst: Instance, i: int, d: District) -> bool:
    return integrate(inst.belief(i), d) * 2 == d.measure


def is_minority(inst: Instance, i: int) -> bool:
    """Whether party ``i`` believes it holds at most half of the statewide support.

    A party at exactly one half is classed as minority; both closed forms then
    give ``(0, m)``.
    """
    return inst.belief(i).total <= HALF


def max_competitive_measure(inst: Instance, i: int) -> tuple[Fraction, District]:
    """Largest measure of a district competitive under party ``i``'s beliefs.

    Each density piece contributes excess ``value - 1/2`` per unit length. Full
    neutral pieces are always taken; then the side with the smaller total excess
    is taken whole and the other side is filled greedily, flattest pieces first,
    until the excesses cancel.
    """
    f = inst.belief(i)
    neutral, positive, negative = [], [], []
    for lo, hi, value in f.pieces:
        g = value - HALF
        (neutral if g == 0 else positive if g > 0 else negative).append((abs(g), lo, hi))
    budget = min(
        sum((g * (hi - lo) for g, lo, hi in positive), ZERO),
        sum((g * (hi - lo) for g, lo, hi in negative), ZERO),
    )
    chosen: list[tuple[Fraction, Fraction]] = [(lo, hi) for _, lo, hi in neutral]
    for side in (positive, negative):
        remaining = budget
        for g, lo, hi in sorted(side, key=lambda p: (p[0], p[1])):
            if remaining <= 0:
                break
            length = min(hi - lo, remaining / g)
            chosen.append((lo, lo + length))
            remaining -= g * length
    d = District(_canonical(chosen))
    return d.measure, d


def battleground(inst: Instance, i: int) -> Battleground:
    mu, region = max_competitive_measure(inst, i)
    m_i = math.floor(inst.m * mu)
    if m_i == 0:
        return Battleground(0, EMPTY)
    x_i = austin_cut(inst.belief(i), region, Fraction(m_i, inst.m) / mu).piece_1
    return Battleground(m_i, x_i)


def count_seats(inst: Instance, evaluator: int, winner: int, p: LabeledPartition) -> int:
    """Number of districts ``winner`` carries according to ``evaluator``'s beliefs."""
    problems = p.partition_problems(inst.m) if len(p) == inst.m else ["wrong number of districts"]
    if problems:
        raise PartitionError("; ".join(problems))
    return _count(inst, evaluator, winner, p)


def _count(inst: Instance, evaluator: int, winner: int, p: LabeledPartition) -> int:
    f = inst.density(evaluator, winner)
    half_seat = Fraction(1, 2 * inst.m)
    seats = 0
    for d, t in zip(p.districts, p.tiebreak):
        v = integrate(f, d)
        if v > half_seat or (v == half_seat and t == winner):
            seats += 1
    return seats


def seat_bounds(inst: Instance, i: int, m_i: int | None = None) -> tuple[int, int]:
    """Fewest and most seats party ``i`` can win by its own beliefs."""
    if m_i is None:
        m_i = battleground(inst, i).m_i
    if is_minority(inst, i):
        return 0, m_i
    return inst.m - m_i, inst.m


def geometric_target(min_seats: int, max_seats: int) -> int:
    if not 0 <= min_seats <= max_seats:
        raise ValueError(f"need 0 <= min <= max, got ({min_seats}, {max_seats})")
    return (min_seats + max_seats) // 2


def _proportional(inst: Instance, i: int, region: District, label: int) -> list[tuple[District, int]]:
    return [(d, label) for d in cut_into_districts(inst.belief(i), region, inst.m)]


def _pack_battleground(inst: Instance, i: int, label: int, rest_label: int) -> LabeledPartition:
    bg = battleground(inst, i)
    f = inst.belief(i)
    parts = [(d, label) for d in iterated_cut(f, bg.x_i, Fraction(1, bg.m_i))] if bg.m_i else []
    parts += _proportional(inst, i, bg.x_i.complement(), rest_label)
    return LabeledPartition.build(parts)


def worst_partition(inst: Instance, i: int) -> LabeledPartition:
    """An m-partition attaining party ``i``'s minimum seat count."""
    j = other(i)
    if is_minority(inst, i):
        return LabeledPartition.build(_proportional(inst, i, District.full(), j))
    return _pack_battleground(inst, i, label=j, rest_label=i)


def best_partition(inst: Instance, i: int) -> LabeledPartition:
    """An m-partition attaining party ``i``'s maximum seat count."""
    j = other(i)
    if is_minority(inst, i):
        return _pack_battleground(inst, i, label=i, rest_label=j)
    return LabeledPartition.build(_proportional(inst, i, District.full(), i))


def verify_gt(inst: Instance, p: LabeledPartition) -> TargetReport:
    if len(p) != inst.m:
        raise PartitionError(f"expected {inst.m} districts, got {len(p)}")
    problems = p.partition_problems(inst.m)
    if problems:
        raise PartitionError("; ".join(problems))
    reports = []
    for i in (1, 2):
        lo, hi = seat_bounds(inst, i)
        target = geometric_target(lo, hi)
        achieved = _count(inst, i, i, p)
        reports.append(PartyReport(i, lo, hi, target, achieved, achieved >= target))
    return TargetReport((reports[0], reports[1]))

