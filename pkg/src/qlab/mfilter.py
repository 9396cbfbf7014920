"""Multiplicative filters on finite quantales."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from functools import cached_property

from .order import InputError, iter_bits, mask_of
from .quantale import FiniteQuantale

DEFAULT_CAP = 1 << 20


class CapExceeded(RuntimeError):
    def __init__(self, examined: int, cap: int):
        super().__init__(f"m-filter enumeration refused: more than {cap} candidate up-sets (examined {examined})")
        self.examined = examined
        self.cap = cap


@dataclass(frozen=True)
class MFilter:
    q: FiniteQuantale
    members: int  # bitmask over handles

    def __contains__(self, a: int) -> bool:
        return bool(self.members >> a & 1)

    def elements(self) -> list[int]:
        return list(iter_bits(self.members))

    def __len__(self) -> int:
        return bin(self.members).count("1")

    def __le__(self, other: "MFilter") -> bool:
        return self.members & ~other.members == 0

    @cached_property
    def minimal(self) -> list[int]:
        """The antichain of minimal members, kept for display."""
        return self.q.carrier.minimal_elements(self.members)

    def labels(self) -> list[str]:
        return [self.q.names[a] for a in self.elements()]

    def to_json(self) -> dict:
        return {"members": self.labels(), "minimal": [self.q.names[a] for a in self.minimal]}


def check_mfilter(q: FiniteQuantale, members: int) -> str | None:
    """Name the first violated m-filter condition, or None."""
    if not members >> q.top & 1:
        return "contains-top"
    if q.carrier.up_closure(members) != members:
        return "upward-closed"
    items = list(iter_bits(members))
    for a in items:
        for b in items:
            if not members >> q.mult(a, b) & 1:
                return "multiplicative"
    return None


def make_filter(q: FiniteQuantale, members) -> MFilter:
    mask = members if isinstance(members, int) else mask_of(members)
    problem = check_mfilter(q, mask)
    if problem:
        raise InputError(f"not an m-filter ({problem})")
    return MFilter(q, mask)


def trivial_filter(q: FiniteQuantale) -> MFilter:
    return MFilter(q, 1 << q.top)


def whole_filter(q: FiniteQuantale) -> MFilter:
    return MFilter(q, (1 << q.size) - 1)


def _product_closure(q: FiniteQuantale, seeds: int) -> int:
    closed = seeds | (1 << q.top)
    frontier = list(iter_bits(closed))
    while frontier:
        nxt = []
        for a in frontier:
            for b in iter_bits(closed):
                p = q.mult(a, b)
                if not closed >> p & 1:
                    closed |= 1 << p
                    nxt.append(p)
        frontier = nxt
    return closed


def generate_filter(q: FiniteQuantale, seeds) -> MFilter:
    """Everything above some finite product of seeds."""
    seeds = list(seeds)
    if not seeds:
        raise InputError("generate_filter needs a nonempty seed set")
    return MFilter(q, q.carrier.up_closure(_product_closure(q, mask_of(seeds))))


def minimal_filter(q: FiniteQuantale, f: int) -> MFilter:
    """F_f = {x : f^n <= x for some n}."""
    seen = 0
    p = f
    while not seen >> p & 1:
        seen |= 1 << p
        p = q.mult(p, f)
    return MFilter(q, q.carrier.up_closure(seen | (1 << q.top)))


def comaximal_filter(q: FiniteQuantale, a: int) -> MFilter:
    """F_{perp a} = {x : x + a = 1}."""
    return MFilter(q, mask_of(x for x in q.elements() if q.join(x, a) == q.top))


def codense_filter(q: FiniteQuantale, a: int) -> MFilter:
    """F_{not| a} = {x : xy <= a implies y <= a}."""
    members = []
    for x in q.elements():
        if all(q.leq(y, a) for y in q.elements() if q.leq(q.mult(x, y), a)):
            members.append(x)
    return MFilter(q, mask_of(members))


def filter_product(f: MFilter, g: MFilter) -> MFilter:
    return MFilter(f.q, f.members & g.members)


def filter_sum(f: MFilter, g: MFilter) -> MFilter:
    return generate_filter(f.q, iter_bits(f.members | g.members))


def product_of_filters(filters) -> MFilter:
    filters = list(filters)
    out = filters[0].members
    for g in filters[1:]:
        out &= g.members
    return MFilter(filters[0].q, out)


def sum_of_filters(filters) -> MFilter:
    filters = list(filters)
    mask = 0
    for g in filters:
        mask |= g.members
    return generate_filter(filters[0].q, iter_bits(mask))


def enumerate_mfilters(q: FiniteQuantale, cap: int = DEFAULT_CAP) -> list[MFilter]:
    """All m-filters, found by walking antichains (one per up-set)."""
    leq = q.carrier.leq_matrix
    n = q.size
    # comparable[a] = bitmask of elements comparable with a
    comparable = [sum(1 << b for b in range(n) if leq[a][b] or leq[b][a]) for a in range(n)]
    found: list[int] = []
    examined = 0

    def walk(start: int, chosen: int, blocked: int) -> None:
        nonlocal examined
        examined += 1
        if examined > cap:
            raise CapExceeded(examined, cap)
        if chosen:
            up = q.carrier.up_closure(chosen)
            if check_mfilter(q, up) is None:
                found.append(up)
        for a in range(start, n):
            if not blocked >> a & 1:
                walk(a + 1, chosen | (1 << a), blocked | comparable[a])

    walk(0, 0, 0)
    return [MFilter(q, m) for m in sorted(found)]


def mf_quantale(q: FiniteQuantale, cap: int = DEFAULT_CAP) -> tuple[FiniteQuantale, list[MFilter]]:
    """mF(Q): order by inclusion, join = generated sum, mult = intersection."""
    filters = enumerate_mfilters(q, cap)
    idx = {f.members: i for i, f in enumerate(filters)}
    join = [[idx[filter_sum(f, g).members] for g in filters] for f in filters]
    mult = [[idx[f.members & g.members] for g in filters] for f in filters]
    names = ["{" + ",".join(f.labels()) + "}" for f in filters]
    top = idx[(1 << q.size) - 1]
    return FiniteQuantale.from_tables(names, join, mult, top), filters


def is_solid(f: MFilter) -> bool:
    """Every cover of a member has a finite subfamily whose join is a member.

    Definitional check over all subfamilies; a finite carrier always passes
    since a family is its own finite subfamily, but the search still looks
    for the smallest such subfamily.
    """
    q = f.q
    n = q.size
    if n <= 12:
        families = range(1, 1 << n)
    else:
        # past the budget, scan the families of at most three elements
        families = (mask_of(c) for k in (1, 2, 3) for c in combinations(range(n), k))
    for fam in families:
        if f.members >> q.carrier.join_mask(fam) & 1 and not _finite_subcover(q, f, fam):
            return False
    return True


def _finite_subcover(q: FiniteQuantale, f: MFilter, fam: int) -> int:
    items = list(iter_bits(fam))
    for size in range(1, len(items) + 1):
        for sub in combinations(items, size):
            if f.members >> q.carrier.join_set(sub) & 1:
                return mask_of(sub)
    return 0


# ---------------------------------------------------------------- mini-language


def _split_args(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "({[<":
            depth += 1
        elif ch in ")}]>":
            depth -= 1
            if depth < 0:
                raise InputError("unbalanced parentheses in filter spec")
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise InputError("unbalanced parentheses in filter spec")
    parts.append("".join(cur).strip())
    return [p for p in parts if p]


_OPS = ("gen", "min", "comax", "codense", "sum", "prod")


def parse_filter_spec(q: FiniteQuantale, spec: str) -> MFilter:
    """Evaluate the filter mini-language.

    Forms: ``trivial``, ``all``, ``gen(e1,...)``, ``min(e)``, ``comax(e)``,
    ``codense(e)``, ``sum(s1,s2)``, ``prod(s1,s2)``. ``op:args`` is accepted
    as a synonym for ``op(args)``. Elements are given by their labels.
    """
    s = spec.strip()
    if s == "trivial":
        return trivial_filter(q)
    if s == "all":
        return whole_filter(q)
    op, args = None, None
    for name in _OPS:
        if s.startswith(name + ":"):
            op, args = name, s[len(name) + 1 :]
            break
        if s.startswith(name + "(") and s.endswith(")"):
            op, args = name, s[len(name) + 1 : -1]
            break
    if op is None:
        raise InputError(f"cannot parse filter spec {spec!r}")
    parts = _split_args(args)
    if not parts:
        raise InputError(f"filter spec {spec!r} has no arguments")
    if op in ("sum", "prod"):
        subs = [parse_filter_spec(q, p) for p in parts]
        return sum_of_filters(subs) if op == "sum" else product_of_filters(subs)
    elems = [q.carrier.index(p) for p in parts]
    if op == "gen":
        return generate_filter(q, elems)
    if len(elems) != 1:
        raise InputError(f"{op} takes exactly one element")
    fn = {"min": minimal_filter, "comax": comaximal_filter, "codense": codense_filter}[op]
    return fn(q, elems[0])
