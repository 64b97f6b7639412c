import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairdistrict.cutting import split_left_to_right
from fairdistrict.intervals import EMPTY, Density, District, Instance
from fairdistrict.targets import (
    LabeledPartition,
    PartitionError,
    battleground,
    best_partition,
    count_seats,
    geometric_target,
    is_competitive,
    is_minority,
    max_competitive_measure,
    seat_bounds,
    verify_gt,
    worst_partition,
)
from helpers import random_instance

HALF = Density.constant(F(1, 2))
ONE = Density.constant(1)
ZERO = Density.constant(0)
THREE_TENTHS = Density.step(F(3, 10), 1, 0)
STEP = Density.step(F(1, 2), 1, 0)


def equal_parts(m, label):
    return LabeledPartition.build([(d, label) for d in split_left_to_right(District.full(), m)])


def test_is_competitive_examples():
    assert is_competitive(Instance(2, HALF, HALF), 1, District.of((F(1, 7), F(2, 3))))
    assert not is_competitive(Instance(2, ONE, ONE), 1, District.of((0, F(1, 2))))
    assert is_competitive(Instance(2, STEP, STEP), 1, District.of((F(1, 4), F(3, 4))))


def test_battleground_examples():
    bg = battleground(Instance(10, HALF, HALF), 1)
    assert bg.m_i == 10 and bg.x_i == District.full()
    bg = battleground(Instance(7, ONE, ONE), 2)
    assert bg.m_i == 0 and bg.x_i == EMPTY
    inst = Instance(10, THREE_TENTHS, THREE_TENTHS.complement())
    mu, _ = max_competitive_measure(inst, 1)
    assert mu == F(3, 5)
    bg = battleground(inst, 1)
    assert bg.m_i == 6 and bg.x_i.measure == F(6, 10) and is_competitive(inst, 1, bg.x_i)


def test_count_seats_examples():
    assert count_seats(Instance(4, ONE, ONE), 1, 1, equal_parts(4, 2)) == 4
    assert count_seats(Instance(2, HALF, HALF), 1, 1, equal_parts(2, 2)) == 0
    inst = Instance(10, THREE_TENTHS, THREE_TENTHS.complement())
    for label in (1, 2):
        assert count_seats(inst, 1, 1, equal_parts(10, label)) == 3


def test_count_seats_rejects_partial():
    inst = Instance(2, HALF, HALF)
    with pytest.raises(PartitionError):
        count_seats(inst, 1, 1, LabeledPartition.build([(District.of((0, F(1, 2))), 1)]))
    with pytest.raises(PartitionError):
        verify_gt(inst, LabeledPartition.build([(District.of((0, F(1, 2))), 1), (District.of((0, F(1, 2))), 2)]))


def test_worst_and_best_examples():
    inst = Instance(4, HALF, HALF)
    assert count_seats(inst, 1, 1, worst_partition(inst, 1)) == 0
    assert count_seats(inst, 1, 1, best_partition(inst, 1)) == 4
    inst = Instance(5, ONE, ONE)
    assert count_seats(inst, 1, 1, worst_partition(inst, 1)) == 5
    inst = Instance(5, ZERO, ONE)
    assert count_seats(inst, 1, 1, best_partition(inst, 1)) == 0
    inst = Instance(10, THREE_TENTHS, THREE_TENTHS.complement())
    assert count_seats(inst, 1, 1, worst_partition(inst, 1)) == 0
    assert count_seats(inst, 1, 1, best_partition(inst, 1)) == 6
    assert count_seats(inst, 2, 2, worst_partition(inst, 2)) == 4
    assert count_seats(inst, 2, 2, best_partition(inst, 2)) == 10


@pytest.mark.parametrize("lo, hi, target", [(5, 9, 7), (0, 0, 0), (3, 10, 6), (4, 4, 4)])
def test_geometric_target(lo, hi, target):
    assert geometric_target(lo, hi) == target


def test_geometric_target_rejects_bad_bounds():
    with pytest.raises(ValueError):
        geometric_target(5, 3)
    with pytest.raises(ValueError):
        geometric_target(-1, 3)


def test_verify_gt_examples():
    inst = Instance(2, HALF, HALF)
    halves = split_left_to_right(District.full(), 2)
    report = verify_gt(inst, LabeledPartition.build([(halves[0], 1), (halves[1], 2)]))
    assert [(p.target, p.achieved) for p in report.parties] == [(1, 1), (1, 1)]
    assert report.satisfied

    inst = Instance(3, ONE, ONE)
    assert verify_gt(inst, equal_parts(3, 1)).satisfied

    inst = Instance(10, THREE_TENTHS, THREE_TENTHS.complement())
    report = verify_gt(inst, equal_parts(10, 1))
    assert (report[1].min_seats, report[1].max_seats, report[1].target) == (0, 6, 3)
    assert (report[2].min_seats, report[2].max_seats, report[2].target) == (4, 10, 7)
    assert report[1].to_json()["satisfied"] is True
    assert report[2].achieved == 7 and report[2].satisfied


def test_boundary_party_is_minority():
    inst = Instance(4, STEP, STEP)
    assert is_minority(inst, 1)
    assert seat_bounds(inst, 1) == (0, 4)


seeds = st.integers(min_value=0, max_value=10**9)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_extreme_partitions_attain_bounds(seed):
    inst = random_instance(random.Random(seed))
    for i in (1, 2):
        lo, hi = seat_bounds(inst, i)
        worst, best = worst_partition(inst, i), best_partition(inst, i)
        assert worst.is_full(inst.m) and best.is_full(inst.m)
        assert count_seats(inst, i, i, worst) == lo
        assert count_seats(inst, i, i, best) == hi
        for p in (worst, best):
            assert count_seats(inst, i, 1, p) + count_seats(inst, i, 2, p) == inst.m


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_battleground_is_competitive_and_sized(seed):
    inst = random_instance(random.Random(seed))
    for i in (1, 2):
        bg = battleground(inst, i)
        assert bg.x_i.measure * inst.m == bg.m_i
        assert is_competitive(inst, i, bg.x_i)
        assert (bg.m_i == 0) == bg.x_i.is_empty
        mu, region = max_competitive_measure(inst, i)
        assert region.measure == mu and is_competitive(inst, i, region)
