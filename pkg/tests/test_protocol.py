import json
import random
from fractions import Fraction as F

import pytest

from fairdistrict import protocol
from fairdistrict.intervals import Density, Instance, integrate
from fairdistrict.protocol import (
    MAJORITY_EASY,
    MAJORITY_PACKED,
    MINORITY,
    ProtocolInvariantError,
    build_gt_partition,
)
from fairdistrict.targets import battleground, is_competitive
from helpers import random_instance

HALF = Density.constant(F(1, 2))
ONE = Density.constant(1)
THREE_TENTHS = Density.step(F(3, 10), 1, 0)


def test_landslide_beliefs():
    trace = build_gt_partition(Instance(5, ONE, ONE))
    assert trace.report.satisfied
    assert [p.achieved for p in trace.report.parties] == [5, 5]


def test_symmetric_half_instance():
    trace = build_gt_partition(Instance(2, HALF, HALF))
    assert [(p.target, p.achieved) for p in trace.report.parties] == [(1, 1), (1, 1)]
    assert trace.cutter == 2  # equal battlegrounds: party 2 cuts


def test_three_tenths_agreement():
    trace = build_gt_partition(Instance(10, THREE_TENTHS, THREE_TENTHS.complement()))
    r = trace.report
    assert (r[1].target, r[2].target) == (3, 7)
    assert r[1].achieved >= 3 and r[2].achieved >= 7


def test_trace_records_structure_and_serializes():
    inst = Instance(10, THREE_TENTHS, THREE_TENTHS.complement())
    trace = build_gt_partition(inst)
    j, i, m = trace.cutter, trace.chooser, inst.m
    assert battleground(inst, j).m_i <= battleground(inst, i).m_i
    for e in trace.pieces["E_1"] + trace.pieces["E_2"]:
        assert e.measure == F(1, m) and is_competitive(inst, j, e)
    for d in trace.pieces.get("F", []):
        assert d.measure == F(1, m) and integrate(inst.belief(i), d) >= F(1, 2 * m)
    assert trace.final.is_full(m)
    assert all(c.holds for c in trace.checks)
    json.dumps(trace.to_json())


def test_packed_branch_fixtures(packed_instances):
    for inst in packed_instances:
        trace = build_gt_partition(inst)
        assert trace.chooser_branch == MAJORITY_PACKED
        assert trace.report.satisfied
        i = trace.chooser
        m_i = trace.battlegrounds[i].m_i
        assert trace.report[i].achieved >= inst.m - (m_i + 1) // 2


@pytest.mark.parametrize("seed", range(4))
def test_random_instances_meet_both_targets(seed):
    rng = random.Random(1000 + seed)
    branches = set()
    for _ in range(40):
        inst = random_instance(rng)
        trace = build_gt_partition(inst)
        assert trace.report.satisfied
        assert trace.final.is_full(inst.m)
        branches.add(trace.chooser_branch)
    assert branches & {MINORITY, MAJORITY_EASY}


def test_invariant_failure_carries_trace(monkeypatch):
    # a broken cut routine must surface as an invariant violation, never a wrong answer
    def bad_cut(f, d, s):
        from fairdistrict.cutting import CutResult

        return CutResult(d, d)

    monkeypatch.setattr(protocol, "austin_cut", bad_cut)
    with pytest.raises(ProtocolInvariantError) as info:
        build_gt_partition(Instance(2, HALF, HALF))
    assert info.value.trace.checks and not info.value.trace.checks[-1].holds
