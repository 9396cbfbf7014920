"""A constructive point outside finitely many nowhere-dense closed sets."""

from __future__ import annotations

from fractions import Fraction

from ..order import InputError
from .quantale import regularize
from .sets import IntervalSet, Space


def parse_closed_set(space: Space, data) -> IntervalSet:
    """A closed set given as a list of [lo, hi] closed intervals (lo == hi for points)."""
    if not isinstance(data, list):
        raise InputError("a closed set is a list of [lo, hi] pairs")
    parts = []
    for item in data:
        if isinstance(item, list) and len(item) == 2:
            parts.append((item[0], item[1], True, True))
        else:
            raise InputError(f"bad closed interval {item!r}")
    return IntervalSet.of(*parts) & space.whole


def check_nowhere_dense(space: Space, c: IntervalSet, index: int = 0) -> None:
    if not space.is_closed(c):
        raise InputError(f"set #{index} is not closed")
    if regularize(space, space.complement(c)) != space.whole:
        raise InputError(f"set #{index} is not nowhere dense (it has interior)")


def baire_witness(space: Space, closed_sets: list[IntervalSet], check: bool = True) -> Fraction:
    """Shrink nested closed intervals so the k-th one avoids the k-th set.

    Start from the first segment. At step k take the leftmost component of
    (interior of the current interval) minus C_k, replace the current
    interval by the closed middle third of that component, and finally
    return the midpoint.
    """
    if check:
        for i, c in enumerate(closed_sets):
            check_nowhere_dense(space, c, i)
    lo, hi = space.segments[0]
    for c in closed_sets:
        rest = IntervalSet.open(lo, hi) - c
        if rest.is_empty():
            # impossible for nowhere-dense c; kept as a guard
            raise AssertionError("interval swallowed by a nowhere-dense set")
        a, b = rest.parts[0][0], rest.parts[0][1]
        third = (b - a) / 3
        lo, hi = a + third, b - third
    point = (lo + hi) / 2
    for i, c in enumerate(closed_sets):
        if point in c:
            raise AssertionError(f"witness lies in set #{i}")
    return point
