"""Exact finite unions of rational intervals, and spaces made of closed segments.

A set is kept in a canonical form: sorted, pairwise disjoint, maximal
intervals. Boolean operations, closure and interior are computed on the
"atoms" cut out by all endpoints involved (each endpoint, and each open gap
between consecutive endpoints, is either wholly in or wholly out).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..order import InputError

Part = tuple[Fraction, Fraction, bool, bool]  # lo, hi, lo_closed, hi_closed


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise InputError("floating point endpoints are not accepted; use integers or 'p/q' strings")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {x!r}") from exc


@dataclass(frozen=True)
class IntervalSet:
    parts: tuple[Part, ...] = ()

    # ---- construction

    @staticmethod
    def of(*parts) -> "IntervalSet":
        """Build from (lo, hi, lo_closed, hi_closed) tuples; normalises."""
        cleaned = []
        for p in parts:
            lo, hi, lc, hc = frac(p[0]), frac(p[1]), bool(p[2]), bool(p[3])
            if lo > hi or (lo == hi and not (lc and hc)):
                continue  # empty
            cleaned.append((lo, hi, lc, hc))
        return _normalise(cleaned)

    @staticmethod
    def closed(lo, hi) -> "IntervalSet":
        return IntervalSet.of((lo, hi, True, True))

    @staticmethod
    def open(lo, hi) -> "IntervalSet":
        return IntervalSet.of((lo, hi, False, False))

    @staticmethod
    def point(x) -> "IntervalSet":
        return IntervalSet.of((x, x, True, True))

    @staticmethod
    def points(xs: Iterable) -> "IntervalSet":
        return IntervalSet.of(*((x, x, True, True) for x in xs))

    # ---- queries

    def is_empty(self) -> bool:
        return not self.parts

    def __contains__(self, x) -> bool:
        x = frac(x)
        for lo, hi, lc, hc in self.parts:
            if lo < x < hi or (x == lo and lc) or (x == hi and hc):
                return True
        return False

    def endpoints(self) -> set[Fraction]:
        out = set()
        for lo, hi, _, _ in self.parts:
            out.add(lo)
            out.add(hi)
        return out

    def length(self) -> Fraction:
        return sum((hi - lo for lo, hi, _, _ in self.parts), Fraction(0))

    def issubset(self, other: "IntervalSet") -> bool:
        return (self - other).is_empty()

    __le__ = issubset

    # ---- boolean operations

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return _combine([self, other], lambda a, b: a or b)

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        return _combine([self, other], lambda a, b: a and b)

    def __sub__(self, other: "IntervalSet") -> "IntervalSet":
        return _combine([self, other], lambda a, b: a and not b)

    def closure(self) -> "IntervalSet":
        pts = sorted(self.endpoints())
        pin, gin = _membership(self, pts)
        pin = [p or (i > 0 and gin[i - 1]) or (i < len(gin) and gin[i]) for i, p in enumerate(pin)]
        return _from_atoms(pts, pin, gin)

    def interior(self) -> "IntervalSet":
        """Interior in the real line."""
        pts = sorted(self.endpoints())
        pin, gin = _membership(self, pts)
        pin = [p and i > 0 and i < len(gin) and gin[i - 1] and gin[i] for i, p in enumerate(pin)]
        return _from_atoms(pts, pin, gin)

    def components(self) -> list["IntervalSet"]:
        return [IntervalSet((p,)) for p in self.parts]

    # ---- display / json

    def __str__(self) -> str:
        if not self.parts:
            return "{}"
        out = []
        for lo, hi, lc, hc in self.parts:
            if lo == hi:
                out.append("{" + str(lo) + "}")
            else:
                out.append(("[" if lc else "(") + f"{lo},{hi}" + ("]" if hc else ")"))
        return " u ".join(out)

    def to_json(self) -> list:
        return [[str(lo), str(hi), lc, hc] for lo, hi, lc, hc in self.parts]

    @staticmethod
    def from_json(data: Sequence) -> "IntervalSet":
        if not isinstance(data, list):
            raise InputError("an interval set must be a list of [lo, hi, lo_closed, hi_closed]")
        parts = []
        for item in data:
            if not isinstance(item, list) or len(item) != 4:
                raise InputError(f"bad interval {item!r}")
            lo, hi, lc, hc = item
            if not isinstance(lc, bool) or not isinstance(hc, bool):
                raise InputError(f"end flags must be booleans in {item!r}")
            parts.append((frac(lo), frac(hi), lc, hc))
        return IntervalSet.of(*parts)


def _membership(s: IntervalSet, pts: list[Fraction]):
    pin = [p in s for p in pts]
    gin = [((pts[i] + pts[i + 1]) / 2) in s for i in range(len(pts) - 1)]
    return pin, gin


def _combine(sets: Sequence[IntervalSet], op) -> IntervalSet:
    pts = sorted(set().union(*(s.endpoints() for s in sets)))
    mems = [_membership(s, pts) for s in sets]
    pin = [op(*(m[0][i] for m in mems)) for i in range(len(pts))]
    gin = [op(*(m[1][i] for m in mems)) for i in range(len(pts) - 1)]
    return _from_atoms(pts, pin, gin)


def _from_atoms(pts: list[Fraction], pin: list[bool], gin: list[bool]) -> IntervalSet:
    """Rebuild maximal intervals from atom membership (P0 G0 P1 G1 ... Pk)."""
    # walk the atom sequence; atom 2i is point i, atom 2i+1 is gap i
    seq = []
    for i in range(len(pts)):
        seq.append(pin[i])
        if i < len(gin):
            seq.append(gin[i])
    parts: list[Part] = []
    start = None
    for k, inside in enumerate(seq + [False]):
        if inside and start is None:
            start = k
        elif not inside and start is not None:
            end = k - 1
            lo, lc = (pts[start // 2], True) if start % 2 == 0 else (pts[start // 2], False)
            hi, hc = (pts[end // 2], True) if end % 2 == 0 else (pts[end // 2 + 1], False)
            parts.append((lo, hi, lc, hc))
            start = None
    return IntervalSet(tuple(parts))


def _normalise(parts: list[Part]) -> IntervalSet:
    acc = IntervalSet(())
    for p in parts:
        acc = acc | IntervalSet((p,))
    return acc


@dataclass(frozen=True)
class Space:
    """A finite disjoint union of rational closed segments."""

    segments: tuple[tuple[Fraction, Fraction], ...]

    @staticmethod
    def of(segments: Iterable[Sequence]) -> "Space":
        segs = sorted((frac(a), frac(b)) for a, b in segments)
        if not segs:
            raise InputError("a space needs at least one segment")
        for a, b in segs:
            if not a < b:
                raise InputError(f"segment [{a},{b}] must have positive length")
        for (a1, b1), (a2, b2) in zip(segs, segs[1:]):
            if not b1 < a2:
                raise InputError("segments must be pairwise disjoint")
        return Space(tuple(segs))

    @staticmethod
    def unit() -> "Space":
        return Space.of([(0, 1)])

    @property
    def whole(self) -> IntervalSet:
        return IntervalSet.of(*((a, b, True, True) for a, b in self.segments))

    def complement(self, a: IntervalSet) -> IntervalSet:
        return self.whole - a

    def closure(self, a: IntervalSet) -> IntervalSet:
        return (a & self.whole).closure() & self.whole

    def interior(self, a: IntervalSet) -> IntervalSet:
        """Interior relative to the space."""
        return self.whole - self.closure(self.whole - a)

    def exterior(self, a: IntervalSet) -> IntervalSet:
        return self.interior(self.complement(a))

    def is_open(self, a: IntervalSet) -> bool:
        return a.issubset(self.whole) and self.interior(a) == a

    def is_closed(self, a: IntervalSet) -> bool:
        return a.issubset(self.whole) and self.closure(a) == a

    def is_dense(self, a: IntervalSet) -> bool:
        return self.closure(a) == self.whole

    def segment_of(self, x: Fraction) -> tuple[Fraction, Fraction] | None:
        for a, b in self.segments:
            if a <= x <= b:
                return (a, b)
        return None

    def neighbourhood(self, k: IntervalSet, eps: Fraction) -> IntervalSet:
        """Open eps-neighbourhood of a set, relative to the space."""
        grown = IntervalSet.of(*((lo - eps, hi + eps, False, False) for lo, hi, _, _ in k.parts))
        return grown & self.whole

    def to_json(self) -> dict:
        return {"segments": [[str(a), str(b)] for a, b in self.segments]}

    @staticmethod
    def from_json(data) -> "Space":
        if not isinstance(data, dict) or "segments" not in data:
            raise InputError('a space is {"segments": [[lo, hi], ...]}')
        return Space.of(data["segments"])


def make_open(space: Space, parts) -> IntervalSet:
    s = parts if isinstance(parts, IntervalSet) else IntervalSet.of(*parts)
    if not space.is_open(s):
        raise InputError(f"{s} is not open in the space")
    return s
