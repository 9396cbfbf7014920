"""The three-layer quantale L0 u L1 u L2 where the filter L0 is not localizable.

L0 = integers <= 0, L1 = ordinals up to w^2 written a.w^2 + b.w + c, L2 = a
bottom element. Layers are ordered L0 > L1 > L2. Products land in layer
min(i + j, 2); L0 x L0 is integer addition and an integer x acts on L1 by
shifting the finite part: x . (a, b, c) = (a, b, max(c + x, 0)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering

from .order import InputError


@total_ordering
@dataclass(frozen=True)
class OrdElem:
    layer: int
    value: int = 0  # layer 0
    a: int = 0  # layer 1: a.w^2 + b.w + c
    b: int = 0
    c: int = 0

    def __post_init__(self):
        if self.layer == 0:
            if self.value > 0:
                raise InputError("layer 0 holds integers <= 0")
        elif self.layer == 1:
            if self.a not in (0, 1) or self.b < 0 or self.c < 0:
                raise InputError("layer 1 holds a.w^2 + b.w + c with a in {0,1} and b, c >= 0")
            if self.a == 1 and (self.b or self.c):
                raise InputError("w^2 is the largest ordinal in layer 1")
        elif self.layer != 2:
            raise InputError("layers are 0, 1, 2")

    def key(self) -> tuple:
        if self.layer == 0:
            return (2, self.value, 0, 0)
        if self.layer == 1:
            return (1, self.a, self.b, self.c)
        return (0, 0, 0, 0)

    def __lt__(self, other: "OrdElem") -> bool:
        return self.key() < other.key()

    def __str__(self) -> str:
        if self.layer == 0:
            return str(self.value)
        if self.layer == 2:
            return "bottom"
        if self.a:
            return "w^2"
        terms = []
        if self.b:
            terms.append("w" if self.b == 1 else f"{self.b}w")
        if self.c or not terms:
            terms.append(str(self.c))
        return "+".join(terms)


TOP = OrdElem(0, 0)
BOTTOM = OrdElem(2)
OMEGA2 = OrdElem(1, a=1)


def integer(v: int) -> OrdElem:
    return OrdElem(0, value=v)


def ordinal(b: int = 0, c: int = 0) -> OrdElem:
    """The ordinal b.w + c in layer 1."""
    return OrdElem(1, b=b, c=c)


def ord_mult(x: OrdElem, y: OrdElem) -> OrdElem:
    if x.layer == 2 or y.layer == 2:
        return BOTTOM
    if x.layer == 0 and y.layer == 0:
        return integer(x.value + y.value)
    if x.layer == 1 and y.layer == 1:
        return BOTTOM
    if x.layer == 1:
        x, y = y, x
    return OrdElem(1, a=y.a, b=y.b, c=max(y.c + x.value, 0))


def ord_join(x: OrdElem, y: OrdElem) -> OrdElem:
    return max(x, y)


def ord_saturate1(b: OrdElem) -> OrdElem:
    """D(b) = sup{x : s.x <= b for some s in L0}."""
    if b.layer == 0:
        return TOP
    if b.layer == 2:
        return BOTTOM
    if b.a == 1:
        return OMEGA2
    return ordinal(b.b + 1, 0)


def infimum_shift(x: OrdElem) -> OrdElem | None:
    """inf over s in L0 of s.x when it is attained; None for L0 (no least shift)."""
    if x.layer == 0:
        return None
    if x.layer == 2:
        return BOTTOM
    return OrdElem(1, a=x.a, b=x.b, c=0)


def admissible(x: OrdElem, b: OrdElem) -> bool:
    """Is there s in L0 with s.x <= b? Decided through the attained infimum."""
    if x.layer == 0:
        return b.layer == 0  # s.x ranges over all of L0, which sits above L1 and L2
    return infimum_shift(x) <= b


def witness_shift(x: OrdElem, b: OrdElem) -> OrdElem:
    """An explicit s in L0 with s.x <= b (assumes admissible)."""
    if x.layer == 0:
        return integer(min(0, b.value - x.value))
    if x.layer == 2:
        return TOP
    return integer(-x.c)


def sample_grid(limit: int = 8) -> list[OrdElem]:
    out = [integer(-v) for v in range(limit + 1)]
    out += [ordinal(b, c) for b in range(limit + 1) for c in range(limit + 1)]
    out += [OMEGA2, BOTTOM]
    return out


def saturation_certificate(b: OrdElem, limit: int = 8) -> dict:
    """Re-derive D(b) on the sample grid.

    Positive side: every admissible grid element has an explicit shift and
    lies below D(b); for b in L1 the family (b.w + c) with shifts -c climbs
    to D(b) = (b+1).w. Negative side: every grid element above D(b) fails the
    infimum test, and every grid element strictly below D(b) is dominated by
    an admissible one (so D(b) is the least upper bound).
    """
    d = ord_saturate1(b)
    grid = sample_grid(limit)
    adm = [x for x in grid if admissible(x, b)]
    positive = all(ord_mult(witness_shift(x, b), x) <= b and x <= d for x in adm)
    negative = all(not admissible(x, b) for x in grid if x > d)
    tight = all(any(x <= y for y in adm) for x in grid if x < d)
    family = []
    if b.layer == 1 and b.a == 0:
        family = [{"x": str(ordinal(b.b, c)), "s": str(integer(-c))} for c in range(4)]
    return {"b": str(b), "D(b)": str(d), "positive": positive, "negative": negative, "tight": tight, "family": family}


@dataclass(frozen=True)
class ExceedsBound:
    bound: int

    def __str__(self) -> str:
        return f"ExceedsBound({self.bound})"


def ord_min_steps(source: OrdElem, target: OrdElem, bound: int = 64) -> int | ExceedsBound:
    """Least n <= bound with source <= D^n(target)."""
    if bound < 1:
        raise InputError("bound must be at least 1")
    y = target
    for n in range(bound + 1):
        if source <= y:
            return n
        y = ord_saturate1(y)
    return ExceedsBound(bound)


def nonlocalizability_report(max_n: int = 16) -> dict:
    rows = []
    zero = ordinal(0, 0)
    for n in range(1, max_n + 1):
        steps = ord_min_steps(ordinal(n, 0), zero, bound=max(64, max_n + 1))
        # witness chain n.w -> (n-1).w -> ... -> 0, each link via (k.w + c) with shift -c
        chain = [str(ordinal(k, 0)) for k in range(n, -1, -1)]
        rows.append({"n": n, "steps": steps if isinstance(steps, int) else str(steps), "chain": chain})
    increasing = all(r["steps"] == r["n"] for r in rows)
    top = ord_min_steps(OMEGA2, zero, 64)
    return {
        "target": str(zero),
        "rows": rows,
        "steps_equal_n": increasing,
        "w2_to_0": str(top),
        "uniform_bound_exists": not increasing,
    }
