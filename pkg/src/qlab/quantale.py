"""Finite commutative unital quantales, their modules, and the standard constructors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Sequence

from .order import Carrier, InputError, ValidationReport, check_table_shape, iter_bits, validate_carrier


@dataclass(frozen=True)
class FiniteQuantale:
    carrier: Carrier
    mult_table: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_tables(names: Sequence[str], join, mult, top: int) -> "FiniteQuantale":
        c = Carrier.from_table(names, join, top)
        return FiniteQuantale(c, tuple(tuple(int(x) for x in row) for row in mult))

    @property
    def size(self) -> int:
        return self.carrier.size

    @property
    def top(self) -> int:
        return self.carrier.top

    @property
    def names(self) -> tuple[str, ...]:
        return self.carrier.names

    @property
    def join_table(self) -> tuple[tuple[int, ...], ...]:
        return self.carrier.join_table

    def join(self, a: int, b: int) -> int:
        return self.carrier.join_table[a][b]

    def mult(self, a: int, b: int) -> int:
        return self.mult_table[a][b]

    def leq(self, a: int, b: int) -> bool:
        return self.carrier.leq_matrix[a][b]

    def elements(self) -> range:
        return range(self.size)

    def power(self, a: int, k: int) -> int:
        out = self.top
        for _ in range(k):
            out = self.mult_table[out][a]
        return out

    def product_of(self, items) -> int:
        out = self.top
        for x in items:
            out = self.mult_table[out][x]
        return out

    def label(self, a: int) -> str:
        return self.carrier.names[a]

    def to_json(self) -> dict:
        d = self.carrier.to_json()
        d["mult"] = [list(r) for r in self.mult_table]
        return d


@dataclass(frozen=True)
class FiniteQModule:
    """A Q-module on a finite carrier; ``action[q][m]`` is ``q . m``."""

    q: FiniteQuantale
    carrier: Carrier
    action_table: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return self.carrier.size

    def act(self, s: int, m: int) -> int:
        return self.action_table[s][m]

    def leq(self, a: int, b: int) -> bool:
        return self.carrier.leq_matrix[a][b]

    def join(self, a: int, b: int) -> int:
        return self.carrier.join_table[a][b]

    @cached_property
    def is_self(self) -> bool:
        return self.carrier == self.q.carrier and self.action_table == self.q.mult_table

    def to_json(self) -> dict:
        d = self.carrier.to_json()
        d["kind"] = "module"
        d["action"] = [list(r) for r in self.action_table]
        return d


@dataclass(frozen=True)
class QuantaleHom:
    source: FiniteQuantale
    target: FiniteQuantale
    mapping: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.mapping[a]


# ---------------------------------------------------------------- validation


def validate_quantale(q: FiniteQuantale) -> ValidationReport:
    report = validate_carrier(q.carrier)
    if not report.ok:
        return report
    n = q.size
    if not check_table_shape(q.mult_table, n, n, n, "mult", report):
        return report
    m, j, top = q.mult_table, q.join_table, q.top
    leq = q.carrier.leq_matrix
    for a in range(n):
        if m[top][a] != a or m[a][top] != a:
            report.add("unit", (a,), f"1*{a} = {m[top][a]}")
        for b in range(a + 1, n):
            if m[a][b] != m[b][a]:
                report.add("commutativity", (a, b), f"{a}*{b} = {m[a][b]} but {b}*{a} = {m[b][a]}")
    _first_failing(report, "associativity", n, lambda a, b, c: m[m[a][b]][c] == m[a][m[b][c]])
    _first_failing(report, "distributivity", n, lambda a, b, c: m[a][j[b][c]] == j[m[a][b]][m[a][c]])
    if report.ok:
        # a consequence of the axioms, scanned so the report stays informative
        for a in range(n):
            for b in range(n):
                if not (leq[m[a][b]][a] and leq[m[a][b]][b]):
                    report.add("monotonicity", (a, b))
    return report


def _first_failing(report: ValidationReport, axiom: str, n: int, holds) -> None:
    for a, b, c in itertools.product(range(n), repeat=3):
        if not holds(a, b, c):
            report.add(axiom, (a, b, c))
            return


def validate_module(mod: FiniteQModule) -> ValidationReport:
    report = validate_carrier(mod.carrier)
    if not report.ok:
        return report
    q, n = mod.q, mod.size
    if not check_table_shape(mod.action_table, q.size, n, n, "action", report):
        return report
    act, qm, qj, mj = mod.action_table, q.mult_table, q.join_table, mod.carrier.join_table
    for x in range(n):
        if act[q.top][x] != x:
            report.add("unit", (x,), f"1.{x} = {act[q.top][x]}")
    for s, t, x in itertools.product(range(q.size), range(q.size), range(n)):
        if act[qm[s][t]][x] != act[s][act[t][x]]:
            report.add("associativity", (s, t, x))
            break
    for s, t, x in itertools.product(range(q.size), range(q.size), range(n)):
        if act[qj[s][t]][x] != mj[act[s][x]][act[t][x]]:
            report.add("distributivity-quantale", (s, t, x))
            break
    for s, x, y in itertools.product(range(q.size), range(n), range(n)):
        if act[s][mj[x][y]] != mj[act[s][x]][act[s][y]]:
            report.add("distributivity-module", (s, x, y))
            break
    return report


def validate_hom(h: QuantaleHom) -> ValidationReport:
    report = ValidationReport()
    src, tgt, f = h.source, h.target, h.mapping
    if len(f) != src.size or any(not 0 <= v < tgt.size for v in f):
        report.add("shape", (), "map must send every source handle to a target handle")
        return report
    if f[src.top] != tgt.top:
        report.add("top", (src.top,))
    for a in range(src.size):
        for b in range(src.size):
            if f[src.join(a, b)] != tgt.join(f[a], f[b]):
                report.add("join", (a, b))
            if f[src.mult(a, b)] != tgt.mult(f[a], f[b]):
                report.add("mult", (a, b))
    return report


def is_idempotent(q: FiniteQuantale) -> bool:
    """q*q == q for all q; in that case products are meets (asserted)."""
    if any(q.mult(a, a) != a for a in q.elements()):
        return False
    for a in q.elements():
        for b in q.elements():
            assert q.mult(a, b) == q.carrier.meet(a, b), "idempotent quantale with a product that is not the meet"
    return True


def idempotence_witness(q: FiniteQuantale) -> int | None:
    for a in q.elements():
        if q.mult(a, a) != a:
            return a
    return None


# ---------------------------------------------------------------- constructors


def build_chain_family(kind: str, n: int) -> FiniteQuantale:
    """B_n (mult = min) or L_n (mult = max(-n, a+b)) on the chain -n..0."""
    kind = kind.upper()
    if kind not in ("B", "L"):
        raise InputError(f"unknown chain family {kind!r}")
    if n < 0:
        raise InputError("chain parameter must be nonnegative")
    values = list(range(-n, 1))
    h = {v: i for i, v in enumerate(values)}
    join = [[h[max(a, b)] for b in values] for a in values]
    if kind == "B":
        mult = [[h[min(a, b)] for b in values] for a in values]
    else:
        mult = [[h[max(-n, a + b)] for b in values] for a in values]
    return FiniteQuantale.from_tables([str(v) for v in values], join, mult, h[0])


def _set_label(s: frozenset, order: list) -> str:
    return "{" + ",".join(str(p) for p in order if p in s) + "}"


def build_open_set_quantale(points: Sequence, opens: Sequence[Sequence]) -> FiniteQuantale:
    """O(X) for a finite topology: join = union, mult = intersection."""
    pts = list(points)
    if len(set(pts)) != len(pts):
        raise InputError("points must be distinct")
    universe = frozenset(pts)
    fam = {frozenset(u) for u in opens}
    for u in fam:
        if not u <= universe:
            raise InputError(f"open set {sorted(map(str, u))} is not a subset of the points")
    if frozenset() not in fam or universe not in fam:
        raise InputError("a topology must contain the empty set and the whole space")
    for u, v in itertools.combinations(fam, 2):
        if u | v not in fam or u & v not in fam:
            raise InputError("open sets must be closed under union and intersection")
    pos = {p: i for i, p in enumerate(pts)}
    elems = sorted(fam, key=lambda u: (len(u), sorted(pos[p] for p in u)))
    h = {u: i for i, u in enumerate(elems)}
    join = [[h[u | v] for v in elems] for u in elems]
    mult = [[h[u & v] for v in elems] for u in elems]
    return FiniteQuantale.from_tables([_set_label(u, pts) for u in elems], join, mult, h[universe])


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def build_ideal_quantale(n: int) -> FiniteQuantale:
    """Id(Z/n) in divisor form: (d1)+(d2) = (gcd), (d1)(d2) = (gcd(d1 d2, n))."""
    if n < 2:
        raise InputError("modulus must be at least 2")
    ds = divisors(n)
    h = {d: i for i, d in enumerate(ds)}
    join = [[h[gcd(a, b)] for b in ds] for a in ds]
    mult = [[h[gcd(a * b, n)] for b in ds] for a in ds]
    return FiniteQuantale.from_tables([f"({d})" for d in ds], join, mult, h[1])


def ideal_divisor(q: FiniteQuantale, a: int) -> int:
    """Divisor behind a handle of build_ideal_quantale."""
    return int(q.names[a].strip("()"))


def ideal_quotient_hom(n: int, m: int) -> QuantaleHom:
    """Id(Z/n) -> Id(Z/m) for m | n, sending (d) to (gcd(d, m))."""
    if m < 2 or n % m:
        raise InputError("target modulus must be a divisor of n, at least 2")
    src, tgt = build_ideal_quantale(n), build_ideal_quantale(m)
    tgt_h = {ideal_divisor(tgt, i): i for i in tgt.elements()}
    mapping = tuple(tgt_h[gcd(ideal_divisor(src, a), m)] for a in src.elements())
    return QuantaleHom(src, tgt, mapping)


def prime_elements(q: FiniteQuantale) -> list[int]:
    out = []
    for p in q.elements():
        if p == q.top:
            continue
        if all(q.leq(a, p) or q.leq(b, p) for a in q.elements() for b in q.elements() if q.leq(q.mult(a, b), p)):
            out.append(p)
    return out


def maximal_elements_below_top(q: FiniteQuantale) -> list[int]:
    below = sum(1 << a for a in q.elements() if a != q.top)
    return q.carrier.maximal_elements(below) if below else []


def product_quantale(q1: FiniteQuantale, q2: FiniteQuantale) -> FiniteQuantale:
    pairs = list(itertools.product(q1.elements(), q2.elements()))
    h = {p: i for i, p in enumerate(pairs)}
    join = [[h[(q1.join(a, c), q2.join(b, d))] for (c, d) in pairs] for (a, b) in pairs]
    mult = [[h[(q1.mult(a, c), q2.mult(b, d))] for (c, d) in pairs] for (a, b) in pairs]
    names = [f"<{q1.names[a]},{q2.names[b]}>" for a, b in pairs]
    return FiniteQuantale.from_tables(names, join, mult, h[(q1.top, q2.top)])


def self_module(q: FiniteQuantale) -> FiniteQModule:
    return FiniteQModule(q, q.carrier, q.mult_table)


def pullback_module(h: QuantaleHom, mod: FiniteQModule) -> FiniteQModule:
    """View a module over ``h.target`` as a module over ``h.source``."""
    if mod.q != h.target:
        raise InputError("module is not over the target of the homomorphism")
    action = tuple(mod.action_table[h.mapping[s]] for s in h.source.elements())
    return FiniteQModule(h.source, mod.carrier, action)


def identity_hom(q: FiniteQuantale) -> QuantaleHom:
    return QuantaleHom(q, q, tuple(q.elements()))


def trivial_quantale() -> FiniteQuantale:
    return FiniteQuantale.from_tables(["*"], [[0]], [[0]], 0)


# ---------------------------------------------------------------- isomorphism


def _initial_colors(q: FiniteQuantale) -> list[int]:
    n = q.size
    leq = q.carrier.leq_matrix
    return _compress(
        [
            (
                a == q.top,
                sum(leq[x][a] for x in range(n)),
                sum(leq[a][x] for x in range(n)),
                q.mult(a, a) == a,
            )
            for a in range(n)
        ]
    )


def _refine(q: FiniteQuantale, colors: list[int]) -> list[int]:
    """Iterated colour refinement on the (join, mult) tables."""
    n = q.size
    while True:
        sig = []
        for a in range(n):
            row = sorted((colors[b], colors[q.join(a, b)], colors[q.mult(a, b)]) for b in range(n))
            sig.append((colors[a], tuple(row)))
        new = _compress(sig)
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _compress(keys: list) -> list[int]:
    table = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys]


def _encode(q: FiniteQuantale, order: Sequence[int]) -> tuple:
    pos = {a: i for i, a in enumerate(order)}
    j = tuple(pos[q.join(a, b)] for a in order for b in order)
    m = tuple(pos[q.mult(a, b)] for a in order for b in order)
    return (q.size, pos[q.top], j, m)


def canonical_form(q: FiniteQuantale) -> tuple:
    """Least table encoding found by individualisation-refinement.

    Exponential in the worst case (highly symmetric carriers), cheap at the
    sizes used here.
    """

    def rec(colors: list[int]) -> tuple:
        colors = _refine(q, colors)
        classes: dict[int, list[int]] = {}
        for a, c in enumerate(colors):
            classes.setdefault(c, []).append(a)
        split = next((classes[c] for c in sorted(classes) if len(classes[c]) > 1), None)
        if split is None:
            return _encode(q, sorted(range(q.size), key=lambda a: colors[a]))
        best = None
        for a in split:
            # individualise a: it gets its own colour just below its class
            trial = [2 * c + 1 for c in colors]
            trial[a] -= 1
            enc = rec(_compress(trial))
            if best is None or enc < best:
                best = enc
        return best

    return rec(_initial_colors(q))


def find_isomorphism(q1: FiniteQuantale, q2: FiniteQuantale) -> tuple[int, ...] | None:
    """Return a structure-preserving bijection q1 -> q2, or None."""
    if q1.size != q2.size:
        return None
    return _search_iso(q1, q2)


def _search_iso(q1: FiniteQuantale, q2: FiniteQuantale) -> tuple[int, ...] | None:
    n = q1.size
    leq1, leq2 = q1.carrier.leq_matrix, q2.carrier.leq_matrix

    def inv(q, leq, a):
        return (
            a == q.top,
            sum(leq[x][a] for x in range(n)),
            sum(leq[a][x] for x in range(n)),
            q.mult(a, a) == a,
            sum(q.mult(a, b) == a for b in range(n)),
        )

    i1 = [inv(q1, leq1, a) for a in range(n)]
    i2 = [inv(q2, leq2, a) for a in range(n)]
    if sorted(i1) != sorted(i2):
        return None
    cands = [[b for b in range(n) if i2[b] == i1[a]] for a in range(n)]
    order = sorted(range(n), key=lambda a: len(cands[a]))
    f = [-1] * n
    used = [False] * n

    def consistent(a: int) -> bool:
        for x in range(n):
            if f[x] < 0:
                continue
            for u, v in ((a, x), (x, a)):
                j = q1.join(u, v)
                if f[j] >= 0 and f[j] != q2.join(f[u], f[v]):
                    return False
                m = q1.mult(u, v)
                if f[m] >= 0 and f[m] != q2.mult(f[u], f[v]):
                    return False
        return True

    def rec(k: int) -> bool:
        if k == n:
            return True
        a = order[k]
        for b in cands[a]:
            if used[b]:
                continue
            f[a] = b
            used[b] = True
            if consistent(a) and rec(k + 1):
                return True
            f[a] = -1
            used[b] = False
        return False

    if not rec(0):
        return None
    return tuple(f)


def is_isomorphic(q1: FiniteQuantale, q2: FiniteQuantale) -> bool:
    return find_isomorphism(q1, q2) is not None


def automorphism_count(q: FiniteQuantale) -> int:
    n = q.size
    count = 0
    for perm in itertools.permutations(range(n)):
        if perm[q.top] != q.top:
            continue
        if all(
            perm[q.join(a, b)] == q.join(perm[a], perm[b]) and perm[q.mult(a, b)] == q.mult(perm[a], perm[b])
            for a in range(n)
            for b in range(n)
        ):
            count += 1
    return count


def subquantale(q: FiniteQuantale, keep: Sequence[int]) -> FiniteQuantale | None:
    """Restrict to ``keep`` if it contains top and is closed under join and mult."""
    keep = sorted(set(keep))
    if q.top not in keep:
        return None
    h = {a: i for i, a in enumerate(keep)}
    try:
        join = [[h[q.join(a, b)] for b in keep] for a in keep]
        mult = [[h[q.mult(a, b)] for b in keep] for a in keep]
    except KeyError:
        return None
    return FiniteQuantale.from_tables([q.names[a] for a in keep], join, mult, h[q.top])
