import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairdistrict.intervals import (
    EMPTY,
    Density,
    District,
    Instance,
    district_intersect,
    district_subtract,
    district_union,
    integrate,
    measure,
    to_fraction,
)
from helpers import random_density, random_district

STEP = Density.step(F(1, 2), 1, 0)


@pytest.mark.parametrize(
    "text, expected",
    [("3/10", F(3, 10)), ("0.1", F(1, 10)), (0.1, F(1, 10)), (2, F(2)), ("1", F(1)), (F(1, 3), F(1, 3))],
)
def test_to_fraction_is_exact(text, expected):
    assert to_fraction(text) == expected


def test_to_fraction_rejects_garbage():
    with pytest.raises((ValueError, TypeError)):
        to_fraction("abc")


def test_measure_examples():
    assert measure(EMPTY) == 0
    assert measure(District.full()) == 1
    assert measure(District.of((F(1, 10), F(3, 10)), (F(1, 2), F(3, 5)))) == F(3, 10)


def test_integrate_examples():
    assert integrate(Density.constant(F(1, 2)), District.full()) == F(1, 2)
    assert integrate(STEP, EMPTY) == 0
    assert integrate(STEP, District.of((F(1, 4), F(3, 4)))) == F(1, 4)


def test_set_operation_examples():
    left, right = District.of((0, F(1, 2))), District.of((F(1, 2), 1))
    assert district_union(left, right) == District.full()
    assert district_intersect(left, right) == EMPTY
    assert district_subtract(District.full(), District.of((F(1, 4), F(1, 2)))) == District.of(
        (0, F(1, 4)), (F(1, 2), 1)
    )


def test_district_canonicalizes():
    d = District.of((F(1, 2), 1), (0, F(1, 4)), (F(1, 4), F(1, 2)), (F(1, 3), F(1, 3)))
    assert d == District.full()
    assert District.of(*d.intervals) == d


def test_district_rejects_out_of_range():
    with pytest.raises(ValueError):
        District.of((F(-1, 2), F(1, 2)))
    with pytest.raises(ValueError):
        District.of((F(1, 2), F(1, 4)))


def test_density_must_tile_unit_interval():
    with pytest.raises(ValueError):
        Density.of([(0, F(1, 2), 1)])
    with pytest.raises(ValueError):
        Density.of([(0, F(1, 2), 1), (F(1, 2), 1, 2)])


def test_prefix_takes_leftmost_measure():
    d = District.of((0, F(1, 10)), (F(1, 2), 1))
    assert d.prefix(F(1, 5)) == District.of((0, F(1, 10)), (F(1, 2), F(3, 5)))
    assert d.prefix(0) == EMPTY


def test_instance_json_roundtrip_and_errors():
    inst = Instance(3, STEP, STEP.complement())
    assert Instance.from_json(inst.to_json()) == inst
    with pytest.raises(ValueError):
        Instance.from_json({"m": 2})
    with pytest.raises(ValueError):
        Instance(0, STEP, STEP)


def test_opponent_density_is_complement():
    inst = Instance(2, STEP, Density.constant(F(1, 3)))
    d = District.of((0, F(3, 4)))
    assert inst.value(1, 2, d) == d.measure - integrate(STEP, d)
    assert inst.value(2, 1, d) == d.measure * F(2, 3)


seeds = st.integers(min_value=0, max_value=10**9)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_inclusion_exclusion_and_additivity(seed):
    rng = random.Random(seed)
    a, b = random_district(rng), random_district(rng)
    f = random_density(rng)
    u, i = a | b, a & b
    assert u.measure + i.measure == a.measure + b.measure
    assert integrate(f, u) + integrate(f, i) == integrate(f, a) + integrate(f, b)
    assert integrate(f, a) + integrate(f.complement(), a) == a.measure
    assert 0 <= integrate(f, a) <= a.measure
    diff = a - b
    assert diff.measure == a.measure - i.measure
    assert (diff & b).measure == 0
    assert a.complement().measure == 1 - a.measure


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_canonicalization_idempotent(seed):
    d = random_district(random.Random(seed))
    assert District.of(*d.intervals) == d
    assert d | d == d and d & d == d
