"""Exact rational subsets of the unit interval.

Districts are finite unions of closed intervals with rational endpoints, and
support densities are piecewise constant with rational breakpoints and values.
Everything here is computed with :class:`fractions.Fraction`, so equalities
such as "support equals half the measure" are decided exactly.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def to_fraction(x: RationalLike) -> Fraction:
    """Parse ``x`` exactly.

    Strings may be ``"p/q"`` or decimals (``"0.3"`` becomes ``3/10``). Floats are
    routed through their shortest repr so that ``0.3`` also means ``3/10``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Interval(NamedTuple):
    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


def _canonical(pairs: Iterable[tuple[Fraction, Fraction]]) -> tuple[Interval, ...]:
    items = sorted((lo, hi) for lo, hi in pairs if hi > lo)
    merged: list[list[Fraction]] = []
    for lo, hi in items:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return tuple(Interval(lo, hi) for lo, hi in merged)


@dataclass(frozen=True)
class District:
    """A finite union of closed intervals in canonical form.

    Intervals are sorted, pairwise separated by gaps of positive length, and
    have positive length; the empty district has no intervals.
    """

    intervals: tuple[Interval, ...] = ()

    def __post_init__(self) -> None:
        prev_hi = None
        for iv in self.intervals:
            if not isinstance(iv, Interval):
                raise TypeError("use District.of() to build districts from raw pairs")
            if not (ZERO <= iv.lo < iv.hi <= ONE):
                raise ValueError(f"interval {iv} is not a proper subinterval of [0,1]")
            if prev_hi is not None and iv.lo <= prev_hi:
                raise ValueError("intervals must be sorted with gaps; use District.of()")
            prev_hi = iv.hi

    @classmethod
    def of(cls, *pairs: Sequence[RationalLike]) -> "District":
        """Build a canonical district from ``(lo, hi)`` pairs in any order."""
        parsed = []
        for p in pairs:
            lo, hi = to_fraction(p[0]), to_fraction(p[1])
            if lo > hi:
                raise ValueError(f"interval [{lo}, {hi}] has lo > hi")
            if lo < 0 or hi > 1:
                raise ValueError(f"interval [{lo}, {hi}] leaves [0,1]")
            parsed.append((lo, hi))
        return cls(_canonical(parsed))

    @classmethod
    def full(cls) -> "District":
        return cls((Interval(ZERO, ONE),))

    @property
    def measure(self) -> Fraction:
        return sum((iv.hi - iv.lo for iv in self.intervals), ZERO)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __or__(self, other: "District") -> "District":
        return district_union(self, other)

    def __and__(self, other: "District") -> "District":
        return district_intersect(self, other)

    def __sub__(self, other: "District") -> "District":
        return district_subtract(self, other)

    def complement(self) -> "District":
        """Closure of ``[0,1]`` minus this district."""
        return district_subtract(District.full(), self)

    def prefix(self, length: RationalLike) -> "District":
        """The leftmost part of this district having the given measure."""
        remaining = to_fraction(length)
        if remaining < 0 or remaining > self.measure:
            raise ValueError(f"prefix length {remaining} outside [0, {self.measure}]")
        out = []
        for iv in self.intervals:
            if remaining <= 0:
                break
            take = min(remaining, iv.length)
            out.append(Interval(iv.lo, iv.lo + take))
            remaining -= take
        return District(_canonical(out))

    def to_json(self) -> list[list[str]]:
        return [[format_fraction(iv.lo), format_fraction(iv.hi)] for iv in self.intervals]

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return "{" + ", ".join(f"[{format_fraction(a)}, {format_fraction(b)}]" for a, b in self.intervals) + "}"


EMPTY = District()


def measure(d: District) -> Fraction:
    return d.measure


def district_union(a: District, b: District) -> District:
    return District(_canonical(list(a.intervals) + list(b.intervals)))


def district_intersect(a: District, b: District) -> District:
    out = []
    i = j = 0
    xs, ys = a.intervals, b.intervals
    while i < len(xs) and j < len(ys):
        lo = max(xs[i].lo, ys[j].lo)
        hi = min(xs[i].hi, ys[j].hi)
        if hi > lo:
            out.append((lo, hi))
        if xs[i].hi < ys[j].hi:
            i += 1
        else:
            j += 1
    return District(_canonical(out))


def district_subtract(a: District, b: District) -> District:
    """Closure of ``a \\ b``; endpoint-only contact with ``b`` is ignored."""
    out = []
    j = 0
    ys = b.intervals
    for lo, hi in a.intervals:
        cur = lo
        while j < len(ys) and ys[j].hi <= cur:
            j += 1
        k = j
        while k < len(ys) and ys[k].lo < hi:
            if ys[k].lo > cur:
                out.append((cur, ys[k].lo))
            cur = max(cur, ys[k].hi)
            if cur >= hi:
                break
            k += 1
        if cur < hi:
            out.append((cur, hi))
    return District(_canonical(out))


def union_all(districts: Iterable[District]) -> District:
    pairs: list[tuple[Fraction, Fraction]] = []
    for d in districts:
        pairs.extend(d.intervals)
    return District(_canonical(pairs))


@dataclass(frozen=True)
class Density:
    """Piecewise-constant density on ``[0,1]`` with values in ``[0,1]``.

    ``pieces`` is a tuple of ``(lo, hi, value)`` triples tiling ``[0,1]``.
    Adjacent pieces with equal values are kept as given.
    """

    pieces: tuple[tuple[Fraction, Fraction, Fraction], ...]
    _his: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)
    _prefix: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.pieces:
            raise ValueError("density needs at least one piece")
        expected = ZERO
        for lo, hi, value in self.pieces:
            if lo != expected:
                raise ValueError(f"pieces must abut: expected lo={expected}, got {lo}")
            if hi <= lo:
                raise ValueError(f"piece [{lo}, {hi}] has non-positive length")
            if not ZERO <= value <= ONE:
                raise ValueError(f"density value {value} outside [0,1]")
            expected = hi
        if expected != ONE:
            raise ValueError(f"pieces must end at 1, not {expected}")
        prefix = [ZERO]
        for lo, hi, value in self.pieces:
            prefix.append(prefix[-1] + (hi - lo) * value)
        object.__setattr__(self, "_his", tuple(hi for _, hi, _ in self.pieces))
        object.__setattr__(self, "_prefix", tuple(prefix))

    @classmethod
    def of(cls, pieces: Iterable[Sequence[RationalLike]]) -> "Density":
        return cls(tuple((to_fraction(lo), to_fraction(hi), to_fraction(v)) for lo, hi, v in pieces))

    @classmethod
    def constant(cls, value: RationalLike) -> "Density":
        return cls(((ZERO, ONE, to_fraction(value)),))

    @classmethod
    def step(cls, cut: RationalLike, left: RationalLike, right: RationalLike) -> "Density":
        """Value ``left`` on ``[0, cut]`` and ``right`` on ``[cut, 1]``."""
        c = to_fraction(cut)
        return cls(((ZERO, c, to_fraction(left)), (c, ONE, to_fraction(right))))

    def complement(self) -> "Density":
        return Density(tuple((lo, hi, ONE - v) for lo, hi, v in self.pieces))

    def cumulative(self, x: Fraction) -> Fraction:
        """Integral of the density over ``[0, x]``."""
        if x <= 0:
            return ZERO
        if x >= 1:
            return self._prefix[-1]
        k = bisect.bisect_right(self._his, x)
        lo, _, value = self.pieces[k]
        return self._prefix[k] + (x - lo) * value

    def value_at(self, x: Fraction) -> Fraction:
        """Right-continuous value (the value of the piece starting at or covering ``x``)."""
        k = min(bisect.bisect_right(self._his, x), len(self.pieces) - 1)
        return self.pieces[k][2]

    @property
    def total(self) -> Fraction:
        return self._prefix[-1]

    def breakpoints(self) -> tuple[Fraction, ...]:
        return (ZERO,) + self._his

    def to_json(self) -> list[list[str]]:
        return [[format_fraction(lo), format_fraction(hi), format_fraction(v)] for lo, hi, v in self.pieces]


def integrate(f: Density, d: District) -> Fraction:
    return sum((f.cumulative(iv.hi) - f.cumulative(iv.lo) for iv in d.intervals), ZERO)


@dataclass(frozen=True)
class Instance:
    """A two-party state-cutting instance.

    ``density_1`` is party 1's belief about party 1's support and ``density_2``
    is party 2's belief about party 2's support; the other two support
    functions are their pointwise complements.
    """

    m: int
    density_1: Density
    density_2: Density

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or isinstance(self.m, bool) or self.m < 1:
            raise ValueError(f"district count must be a positive integer, got {self.m!r}")

    def density(self, evaluator: int, party: int) -> Density:
        """Support density of ``party`` according to ``evaluator``."""
        _check_party(evaluator)
        _check_party(party)
        own = self.density_1 if evaluator == 1 else self.density_2
        return own if party == evaluator else own.complement()

    def belief(self, party: int) -> Density:
        return self.density(party, party)

    def value(self, evaluator: int, party: int, d: District) -> Fraction:
        return integrate(self.density(evaluator, party), d)

    def to_json(self) -> dict:
        return {"m": self.m, "densities": {"1": self.density_1.to_json(), "2": self.density_2.to_json()}}

    @classmethod
    def from_json(cls, data: dict) -> "Instance":
        try:
            m = data["m"]
            dens = data["densities"]
            d1, d2 = dens["1"], dens["2"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"instance JSON missing field: {exc}") from exc
        if isinstance(m, str):
            m = int(m)
        return cls(m=m, density_1=Density.of(d1), density_2=Density.of(d2))


def other(party: int) -> int:
    _check_party(party)
    return 3 - party


def _check_party(p: int) -> None:
    if p not in (1, 2):
        raise ValueError(f"party must be 1 or 2, got {p!r}")
