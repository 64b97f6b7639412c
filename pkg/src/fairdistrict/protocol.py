"""Cut-and-choose construction of a partition meeting both parties' geometric targets.

The party with the smaller battleground (the cutter) halves it so that either
half lets it pack enough barely-won districts to reach its target. The other
party (the chooser) decides which half the cutter keeps and districts the rest
of the state itself. How the chooser proceeds depends on whether it believes it
is a minority or a majority party.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .cutting import austin_cut, cut_into_districts, iterated_cut, split_left_to_right
from .intervals import District, Instance, format_fraction, integrate, other, union_all
from .targets import (
    Battleground,
    LabeledPartition,
    TargetReport,
    battleground,
    is_competitive,
    is_minority,
    verify_gt,
)

MINORITY = "minority"
MAJORITY_EASY = "majority-easy"
MAJORITY_PACKED = "majority-packed"


class ProtocolInvariantError(RuntimeError):
    """A step of the construction failed a property it is guaranteed to have.

    This signals a bug, never bad input; ``trace`` holds everything built so far.
    """

    def __init__(self, message: str, trace: "ProtocolTrace"):
        super().__init__(message)
        self.trace = trace


@dataclass
class Check:
    name: str
    holds: bool
    detail: str

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, "detail": self.detail}


@dataclass
class ProtocolTrace:
    cutter: int
    chooser: int
    battlegrounds: dict[int, Battleground]
    halves: tuple[District, District] = (District(), District())
    chooser_branch: str | None = None
    chosen_index: int | None = None  # which half (1 or 2) the cutter keeps
    pieces: dict[str, list[District]] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    final: LabeledPartition | None = None
    report: TargetReport | None = None

    def check(self, name: str, holds: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(holds), detail))
        if not holds:
            raise ProtocolInvariantError(f"invariant failed: {name} ({detail})", self)

    def to_json(self) -> dict[str, Any]:
        return {
            "cutter": self.cutter,
            "chooser": self.chooser,
            "battlegrounds": {
                str(p): {"m_i": bg.m_i, "x_i": bg.x_i.to_json()} for p, bg in self.battlegrounds.items()
            },
            "halves": [h.to_json() for h in self.halves],
            "chooser_branch": self.chooser_branch,
            "chosen_index": self.chosen_index,
            "pieces": {name: [d.to_json() for d in ds] for name, ds in self.pieces.items()},
            "checks": [c.to_json() for c in self.checks],
            "final": self.final.to_json() if self.final is not None else None,
            "report": self.report.to_json() if self.report is not None else None,
        }


def _frac(x: Fraction) -> str:
    return format_fraction(x)


def build_gt_partition(inst: Instance) -> ProtocolTrace:
    """Construct an m-partition satisfying both parties' geometric targets."""
    m = inst.m
    bgs = {1: battleground(inst, 1), 2: battleground(inst, 2)}
    j = 1 if bgs[1].m_i < bgs[2].m_i else 2
    i = other(j)
    trace = ProtocolTrace(cutter=j, chooser=i, battlegrounds=bgs)
    m_j, m_i = bgs[j].m_i, bgs[i].m_i
    f_j = inst.belief(j)

    cut = austin_cut(f_j, bgs[j].x_i, Fraction(1, 2))
    halves = (cut.piece_1, cut.piece_2)
    trace.halves = halves
    for k, h in enumerate(halves, 1):
        trace.check(f"half {k} measure", h.measure == Fraction(m_j, 2 * m), _frac(h.measure))
        trace.check(f"half {k} competitive for cutter", is_competitive(inst, j, h))

    packs = []
    for k, h in enumerate(halves, 1):
        pack = iterated_cut(f_j, h, Fraction(2, m_j)) if m_j else []
        trace.check(f"cutter pack {k} size", len(pack) == m_j // 2, str(len(pack)))
        for e in pack:
            trace.check(f"cutter pack {k} district measure", e.measure == Fraction(1, m), _frac(e.measure))
            trace.check(f"cutter pack {k} district competitive", is_competitive(inst, j, e))
        packs.append(pack)
    trace.pieces["E_1"], trace.pieces["E_2"] = packs

    if is_minority(inst, i):
        trace.chooser_branch = MINORITY
        final = _minority_chooser(inst, trace, i, j, halves, packs)
    else:
        final = _majority_chooser(inst, trace, i, j, packs)

    trace.final = final
    trace.check("final is a full m-partition", final.is_full(m), "; ".join(final.partition_problems(m)))
    report = verify_gt(inst, final)
    trace.report = report
    for pr in report.parties:
        trace.check(f"target met for party {pr.party}", pr.satisfied, f"{pr.achieved} >= {pr.target}")
    return trace


def _fill_remainder(inst: Instance, parts: list[tuple[District, int]], label: int) -> LabeledPartition:
    rest = union_all(d for d, _ in parts).complement()
    parts = parts + [(d, label) for d in split_left_to_right(rest, inst.m)]
    return LabeledPartition.build(parts)


def _minority_chooser(inst, trace, i, j, halves, packs) -> LabeledPartition:
    m = inst.m
    m_i = trace.battlegrounds[i].m_i
    x_i = trace.battlegrounds[i].x_i
    f_i = inst.belief(i)
    half_measure = Fraction(m_i, 2 * m)

    inside = [h & x_i for h in halves]
    spare = x_i - (halves[0] | halves[1])
    need = half_measure - inside[0].measure
    trace.check("half of X_j inside X_i fits", need >= 0 and inside[1].measure <= half_measure)
    enlarged_1 = inside[0] | spare.prefix(need)
    enlarged_2 = x_i - enlarged_1
    trace.check("enlarged halves split X_i evenly", enlarged_2.measure == half_measure, _frac(enlarged_2.measure))
    trace.check("enlarged halves contain their halves", (inside[1] - enlarged_2).measure == 0)
    enlarged = (enlarged_1, enlarged_2)
    trace.pieces["D'_1"], trace.pieces["D'_2"] = [enlarged_1], [enlarged_2]

    quarter = Fraction(m_i, 4 * m)
    k_i = 0 if integrate(f_i, enlarged_1) >= quarter else 1
    trace.check("chooser keeps a half it leads", integrate(f_i, enlarged[k_i]) >= quarter)
    k_j = 1 - k_i
    trace.chosen_index = k_j + 1

    chooser_pack = iterated_cut(f_i, enlarged[k_i], Fraction(2, m_i)) if m_i else []
    trace.check("chooser pack size", len(chooser_pack) == m_i // 2, str(len(chooser_pack)))
    for d in chooser_pack:
        trace.check("chooser district measure", d.measure == Fraction(1, m), _frac(d.measure))
        trace.check("chooser district won", integrate(f_i, d) >= Fraction(1, 2 * m))
    trace.pieces["F"] = chooser_pack

    parts = [(e, j) for e in packs[k_j]] + [(d, i) for d in chooser_pack]
    return _fill_remainder(inst, parts, j)


def _wins(inst: Instance, i: int, d: District, label: int) -> bool:
    v = integrate(inst.belief(i), d)
    half_seat = Fraction(1, 2 * inst.m)
    return v > half_seat or (v == half_seat and label == i)


def _majority_chooser(inst, trace, i, j, packs) -> LabeledPartition:
    m = inst.m
    m_i = trace.battlegrounds[i].m_i
    f_i = inst.belief(i)

    extended: list[list[tuple[District, int]]] = [[(e, j) for e in pack] for pack in packs]
    covered = union_all(packs[0] + packs[1])
    count = len(packs[0]) + len(packs[1])
    trace.check("cutter packs fit in X_i", count <= m_i, f"{count} <= {m_i}")
    extra = cut_into_districts(f_i, covered.complement(), m)[: m_i - count]
    for n, d in enumerate(extra):
        extended[n % 2].append((d, j))
    trace.pieces["extension"] = extra

    wins = [[d for d, t in side if _wins(inst, i, d, t)] for side in extended]
    losses = [[d for d, t in side if not _wins(inst, i, d, t)] for side in extended]
    A = [union_all(w) for w in wins]
    B = [union_all(ls) for ls in losses]
    AB = [A[k] | B[k] for k in (0, 1)]
    cap = Fraction(math.ceil(m_i / 2), m)
    for k in (0, 1):
        trace.check(f"extended packing {k + 1} small", AB[k].measure <= cap, f"{_frac(AB[k].measure)} <= {_frac(cap)}")
    C = (AB[0] | AB[1]).complement()
    trace.pieces.update({"A_1": [A[0]], "A_2": [A[1]], "B_1": [B[0]], "B_2": [B[1]], "C": [C]})

    for k in (0, 1):
        rest = AB[k].complement()
        if integrate(f_i, rest) * 2 >= rest.measure:
            trace.chooser_branch = MAJORITY_EASY
            trace.chosen_index = k + 1
            mine = cut_into_districts(f_i, rest, m)
            for d in mine:
                trace.check("chooser wins every district outside the kept packing", _wins(inst, i, d, i))
            trace.pieces["chooser"] = mine
            return LabeledPartition.build(extended[k] + [(d, i) for d in mine])

    trace.chooser_branch = MAJORITY_PACKED
    trace.check("C leans to the cutter", integrate(f_i, C) * 2 <= C.measure)
    trace.check("C no larger than the chooser's packed wins", C.measure <= A[0].measure + A[1].measure)
    c1_measure = min(A[0].measure, C.measure)
    if C.measure:
        split = austin_cut(f_i, C, c1_measure / C.measure)
        Cs = (split.piece_1, split.piece_2)
    else:
        Cs = (District(), District())
    for k in (0, 1):
        trace.check(f"C_{k + 1} no larger than A_{k + 1}", Cs[k].measure <= A[k].measure)
    trace.pieces["C_1"], trace.pieces["C_2"] = [Cs[0]], [Cs[1]]

    regions = [AB[k] | Cs[k] for k in (0, 1)]
    leads = [integrate(f_i, r) * 2 >= r.measure for r in regions]
    trace.check("chooser leads in some region", any(leads))
    k_i = 0 if leads[0] else 1
    k_j = 1 - k_i
    trace.chosen_index = k_j + 1

    mine = cut_into_districts(f_i, regions[k_i], m)
    for d in mine:
        trace.check("chooser wins every district in its region", _wins(inst, i, d, i))
    trace.pieces["chooser"] = mine
    parts = extended[k_j] + [(d, i) for d in mine]
    won = len(mine) + len(wins[k_j])
    trace.check("chooser reaches its majority bound", won >= m - math.ceil(m_i / 2), f"{won}")
    return _fill_remainder(inst, parts, j)
