"""Proportional cuts: carve a sub-district with a prescribed share of both
measure and support.

:func:`austin_cut` lays the district end to end on ``[0, t]``, slides a
wrap-around window of length ``s*t`` along it and stops where the window's
support equals ``s`` times the district's support. With a piecewise-constant
density the window value is piecewise linear in its offset, so the stopping
point is found exactly, segment by segment.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction

from .intervals import (
    EMPTY,
    ONE,
    ZERO,
    Density,
    District,
    RationalLike,
    _canonical,
    district_subtract,
    integrate,
    to_fraction,
)


@dataclass(frozen=True)
class CutResult:
    piece_1: District
    piece_2: District


class _Relabeled:
    """A district laid end to end on ``[0, t]`` with the density carried along."""

    def __init__(self, f: Density, d: District):
        self.d = d
        self.offsets: list[Fraction] = []
        positions = [ZERO]
        prefix = [ZERO]
        values: list[Fraction] = []
        pos = ZERO
        for iv in d.intervals:
            self.offsets.append(pos)
            k = bisect.bisect_right(f._his, iv.lo)
            x = iv.lo
            while x < iv.hi:
                lo, hi, value = f.pieces[k]
                end = min(hi, iv.hi)
                pos += end - x
                positions.append(pos)
                prefix.append(prefix[-1] + (end - x) * value)
                values.append(value)
                x = end
                k += 1
        self.t = pos
        self.positions = positions
        self.prefix = prefix
        self.values = values
        self.total = prefix[-1]

    def cumulative(self, y: Fraction) -> Fraction:
        # support over [0, y] of the relabeled density extended periodically to [0, 2t]
        if y > self.t:
            return self.total + self.cumulative(y - self.t)
        if y <= 0:
            return ZERO
        k = bisect.bisect_left(self.positions, y) - 1
        return self.prefix[k] + (y - self.positions[k]) * self.values[k]

    def window(self, x: Fraction, width: Fraction) -> Fraction:
        return self.cumulative(x + width) - self.cumulative(x)

    def to_actual(self, a: Fraction, b: Fraction) -> list[tuple[Fraction, Fraction]]:
        out = []
        for iv, off in zip(self.d.intervals, self.offsets):
            lo = max(a, off)
            hi = min(b, off + iv.length)
            if hi > lo:
                out.append((iv.lo + (lo - off), iv.lo + (hi - off)))
        return out


def _window_start(rel: _Relabeled, width: Fraction, target: Fraction) -> Fraction:
    t = rel.t
    # window value bends where either window edge crosses a density breakpoint
    candidates = {ZERO, t}
    for b in rel.positions:
        for x in (b, b - width, b - width + t):
            if ZERO <= x <= t:
                candidates.add(x)
    xs = sorted(candidates)
    hs = [rel.window(x, width) for x in xs]
    for k, (x, h) in enumerate(zip(xs, hs)):
        if h == target:
            return x
        if k + 1 < len(xs):
            h_next = hs[k + 1]
            if (h - target) * (h_next - target) < 0:
                return x + (target - h) * (xs[k + 1] - x) / (h_next - h)
    # the window value averages to the target over [0, t], so a crossing exists
    raise AssertionError("no window start found; relabeled density is inconsistent")


def austin_cut(f: Density, d: District, s: RationalLike) -> CutResult:
    """Split ``d`` into ``piece_1`` with ``s`` of its measure and ``s`` of its
    support under ``f``, and ``piece_2`` holding the rest.

    Among valid window offsets the smallest is used, so the result is
    deterministic. ``piece_1`` is at most one interval longer than ``d``.
    """
    s = to_fraction(s)
    if not ZERO <= s <= ONE:
        raise ValueError(f"cut fraction {s} outside [0,1]")
    if s == 0 or d.is_empty:
        return CutResult(EMPTY, d)
    if s == 1:
        return CutResult(d, EMPTY)
    rel = _Relabeled(f, d)
    width = s * rel.t
    x = _window_start(rel, width, s * rel.total)
    if x + width <= rel.t:
        pairs = rel.to_actual(x, x + width)
    else:
        pairs = rel.to_actual(x, rel.t) + rel.to_actual(ZERO, x + width - rel.t)
    piece_1 = District(_canonical(pairs))
    return CutResult(piece_1, district_subtract(d, piece_1))


def iterated_cut(f: Density, d: District, s: RationalLike) -> list[District]:
    """Cut ``floor(1/s)`` measure-disjoint sub-districts of ``d``, each with
    ``s`` of its measure and ``s`` of its support under ``f``.

    ``s > 1`` yields no pieces.
    """
    s = to_fraction(s)
    if s <= 0:
        raise ValueError(f"iterated cut needs s > 0, got {s}")
    count = math.floor(1 / s)
    pieces: list[District] = []
    rest = d
    for k in range(count):
        remaining_share = ONE - k * s
        if remaining_share == s:
            pieces.append(rest)
            rest = EMPTY
            break
        cut = austin_cut(f, rest, s / remaining_share)
        pieces.append(cut.piece_1)
        rest = cut.piece_2
    return pieces


def cut_into_districts(f: Density, d: District, m: int) -> list[District]:
    """Divide ``d`` into equal districts of measure ``1/m`` with proportional support.

    ``d`` must have measure a multiple of ``1/m``.
    """
    count = d.measure * m
    if count.denominator != 1:
        raise ValueError(f"measure {d.measure} is not a multiple of 1/{m}")
    if count == 0:
        return []
    return iterated_cut(f, d, Fraction(1, int(count)))


def check_cut(f: Density, d: District, s: Fraction, result: CutResult) -> list[str]:
    """Return the violated proportional-cut properties (empty when all hold)."""
    problems = []
    p1, p2 = result.piece_1, result.piece_2
    if (p1 | p2) != d:
        problems.append("pieces do not reassemble the district")
    if (p1 & p2).measure != 0:
        problems.append("pieces overlap in positive measure")
    if p1.measure != s * d.measure or p2.measure != (1 - s) * d.measure:
        problems.append("measures are not proportional")
    v = integrate(f, d)
    if integrate(f, p1) != s * v or integrate(f, p2) != (1 - s) * v:
        problems.append("support is not proportional")
    return problems


def split_left_to_right(d: District, m: int) -> list[District]:
    """Chop ``d`` into consecutive chunks of measure ``1/m``, leftmost first."""
    unit = Fraction(1, m)
    count = d.measure * m
    if count.denominator != 1:
        raise ValueError(f"measure {d.measure} is not a multiple of 1/{m}")
    chunks = []
    rest = d
    for _ in range(int(count)):
        chunk = rest.prefix(unit)
        chunks.append(chunk)
        rest = district_subtract(rest, chunk)
    return chunks
