"""Random instance generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction as F

from fairdistrict.intervals import Density, District, Instance

NICE_VALUES = [F(0), F(1), F(1, 2), F(1, 4), F(3, 4), F(1, 3), F(2, 3)]


def random_density(rng: random.Random, max_pieces: int = 20, grid: int = 60) -> Density:
    k = rng.randint(1, max_pieces)
    cuts = sorted({F(rng.randint(1, grid - 1), grid) for _ in range(k - 1)})
    pts = [F(0)] + cuts + [F(1)]
    pieces = []
    for a, b in zip(pts, pts[1:]):
        v = rng.choice(NICE_VALUES) if rng.random() < 0.5 else F(rng.randint(0, 20), 20)
        pieces.append((a, b, v))
    return Density(tuple(pieces))


def random_instance(rng: random.Random, agreement: bool | None = None, max_m: int = 12) -> Instance:
    m = rng.randint(1, max_m)
    f1 = random_density(rng)
    if agreement is None:
        agreement = rng.random() < 0.3
    f2 = f1.complement() if agreement else random_density(rng)
    return Instance(m, f1, f2)


def random_district(rng: random.Random, max_intervals: int = 4, grid: int = 48) -> District:
    pts = sorted({F(rng.randint(0, grid), grid) for _ in range(2 * rng.randint(1, max_intervals))})
    if len(pts) % 2:
        pts = pts[:-1]
    return District.of(*zip(pts[::2], pts[1::2]))
