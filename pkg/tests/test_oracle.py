import random
from fractions import Fraction as F

import pytest

from fairdistrict.intervals import Density, Instance
from fairdistrict.oracle import (
    AtomInstance,
    EnumerationLimitError,
    brute_max_competitive,
    brute_minmax_seats,
    from_instance,
    vertex_max_competitive_measure,
)
from fairdistrict.targets import battleground, max_competitive_measure, seat_bounds
from helpers import random_density


def test_oracle_examples():
    assert brute_minmax_seats(AtomInstance.of(2, [1] * 4), 1) == (2, 2)
    assert brute_minmax_seats(AtomInstance.of(2, [F(1, 2)] * 4), 1) == (0, 2)
    assert brute_max_competitive(AtomInstance.of(3, [F(1, 2)] * 6), 1) == 3
    assert brute_max_competitive(AtomInstance.of(3, [1] * 6), 1) == 0


def test_three_tenths_on_ten_atoms():
    a = AtomInstance.of(5, [1, 1, 1, 0, 0, 0, 0, 0, 0, 0])
    inst = a.to_instance()
    m_i = brute_max_competitive(a, 1)
    assert m_i == battleground(inst, 1).m_i == 3
    assert brute_minmax_seats(a, 1) == seat_bounds(inst, 1) == (0, 3)
    assert brute_minmax_seats(a, 2) == seat_bounds(inst, 2) == (2, 5)


def test_three_tenths_m10_competitive_size():
    # ten atoms per district would exceed the enumeration bound; one atom each suffices here
    a = AtomInstance.of(10, [1, 1, 1, 0, 0, 0, 0, 0, 0, 0])
    assert brute_max_competitive(a, 1) == 6


def test_enumeration_bound():
    with pytest.raises(EnumerationLimitError):
        brute_minmax_seats(AtomInstance.of(3, [F(1, 2)] * 15), 1)


def test_from_instance_roundtrip():
    inst = Instance(4, Density.step(F(1, 4), 1, 0), Density.step(F(1, 2), 0, 1))
    a = from_instance(inst, 2)
    assert a.to_instance() == Instance(
        4,
        Density.of([(F(k, 8), F(k + 1, 8), 1 if k < 2 else 0) for k in range(8)]),
        Density.of([(F(k, 8), F(k + 1, 8), 0 if k < 4 else 1) for k in range(8)]),
    )
    with pytest.raises(ValueError):
        from_instance(Instance(2, Density.step(F(1, 3), 1, 0), Density.constant(0)), 2)


def test_monotone_in_support():
    rng = random.Random(5)
    for _ in range(30):
        vals = [rng.choice([F(0), F(1, 2), F(1)]) for _ in range(8)]
        k = rng.randrange(8)
        more = list(vals)
        more[k] = min(F(1), vals[k] + F(1, 2))
        assert brute_minmax_seats(AtomInstance.of(2, more), 1)[1] >= brute_minmax_seats(AtomInstance.of(2, vals), 1)[1]


def test_general_atom_values_only_bound_the_continuum():
    # whole-atom districts cannot split an atom, so brute force may undercount m_i
    a = AtomInstance.of(2, [F(3, 4), F(3, 4), F(1, 4), 0])
    assert not a.exact_on_grid
    assert brute_max_competitive(a, 1) <= battleground(a.to_instance(), 1).m_i


def test_vertex_oracle_agrees_with_greedy():
    rng = random.Random(11)
    for _ in range(150):
        f = random_density(rng, max_pieces=9)
        inst = Instance(3, f, f.complement())
        assert vertex_max_competitive_measure(f) == max_competitive_measure(inst, 1)[0]
