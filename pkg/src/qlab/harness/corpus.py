"""Quantale corpora: curated families, the exhaustive small tier, and a seeded random tier."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from ..order import Carrier, validate_carrier
from ..quantale import (
    FiniteQModule,
    FiniteQuantale,
    build_chain_family,
    build_ideal_quantale,
    build_open_set_quantale,
    canonical_form,
    product_quantale,
    validate_module,
    validate_quantale,
)


@dataclass(frozen=True)
class Instance:
    ident: str
    q: FiniteQuantale
    tier: str  # curated | exhaustive | random


@dataclass
class Corpus:
    curated: list[Instance] = field(default_factory=list)
    exhaustive: list[Instance] = field(default_factory=list)
    randomized: list[Instance] = field(default_factory=list)

    def all(self) -> list[Instance]:
        return self.curated + self.exhaustive + self.randomized

    def up_to(self, size: int) -> list[Instance]:
        return [i for i in self.all() if i.q.size <= size]


# ---------------------------------------------------------------- join-semilattices


def _carrier_from_leq(n: int, leq) -> Carrier | None:
    """Build the join table of a poset given as a relation, if every pair has a join."""
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            ubs = [u for u in range(n) if leq[a][u] and leq[b][u]]
            least = [u for u in ubs if all(leq[u][v] for v in ubs)]
            if len(least) != 1:
                return None
            join[a][b] = least[0]
    return Carrier.from_table([str(i) for i in range(n)], join, n - 1)


def labelled_semilattices(n: int):
    """Every join-semilattice on handles 0..n-1 whose top is n-1 (labelled)."""
    inner = list(itertools.combinations(range(n - 1), 2))
    for rels in itertools.product((0, 1, 2), repeat=len(inner)):
        leq = [[a == b or b == n - 1 for b in range(n)] for a in range(n)]
        for (a, b), r in zip(inner, rels):
            if r == 1:
                leq[a][b] = True
            elif r == 2:
                leq[b][a] = True
        if not all(
            leq[a][c] or not (leq[a][b] and leq[b][c]) for a in range(n) for b in range(n) for c in range(n)
        ):
            continue
        c = _carrier_from_leq(n, leq)
        if c is not None:
            yield c


def _carrier_canon(c: Carrier) -> tuple:
    """Least relabelled join table (brute force; only used for tiny carriers)."""
    n = c.size
    best = None
    for inv in itertools.permutations(range(n)):
        pos = {a: i for i, a in enumerate(inv)}
        enc = (pos[c.top],) + tuple(pos[c.join(inv[i], inv[j])] for i in range(n) for j in range(n))
        if best is None or enc < best:
            best = enc
    return best


@lru_cache(maxsize=None)
def semilattices_up_to_iso(n: int) -> tuple[Carrier, ...]:
    seen: dict[tuple, Carrier] = {}
    for c in labelled_semilattices(n):
        seen.setdefault(_carrier_canon(c), c)
    return tuple(seen[k] for k in sorted(seen))


# ---------------------------------------------------------------- multiplication search


def mult_tables(c: Carrier, rng: random.Random | None = None, limit: int | None = None, node_budget: int | None = None):
    """Yield every quantale multiplication on ``c`` (randomised order if rng).

    Backtracking over the unordered pairs of non-top elements; partial tables
    are pruned by monotonicity, commutativity, associativity and binary
    distributivity on already-filled entries.
    """
    n, top = c.size, c.top
    leq, jt = c.leq_matrix, c.join_table
    m = [[-1] * n for _ in range(n)]
    for a in range(n):
        m[top][a] = a
        m[a][top] = a
    cells = [(a, b) for a in range(n) for b in range(a, n) if a != top and b != top]
    lower = [[v for v in range(n) if leq[v][a] and leq[v][b]] for a in range(n) for b in range(n)]
    nodes = 0
    produced = 0

    def ok_partial() -> bool:
        for a in range(n):
            for b in range(n):
                ab = m[a][b]
                if ab < 0:
                    continue
                for d in range(n):
                    bd = m[b][d]
                    if bd >= 0:
                        l, r = m[ab][d], m[a][bd]
                        if l >= 0 and r >= 0 and l != r:
                            return False
                    bj = jt[b][d]
                    x, y, z = m[a][bj], ab, m[a][d]
                    if x >= 0 and z >= 0 and x != jt[y][z]:
                        return False
        return True

    def rec(k: int):
        nonlocal nodes, produced
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            return
        if limit is not None and produced >= limit:
            return
        if k == len(cells):
            produced += 1
            yield tuple(tuple(row) for row in m)
            return
        a, b = cells[k]
        options = list(lower[a * n + b])
        if rng is not None:
            rng.shuffle(options)
        for v in options:
            m[a][b] = m[b][a] = v
            if ok_partial():
                yield from rec(k + 1)
            if limit is not None and produced >= limit:
                break
        m[a][b] = m[b][a] = -1

    yield from rec(0)


def _relabel(q: FiniteQuantale, prefix: str) -> FiniteQuantale:
    return FiniteQuantale(
        Carrier.from_table([f"{prefix}{i}" for i in range(q.size)], q.join_table, q.top), q.mult_table
    )


@lru_cache(maxsize=None)
def exhaustive_quantales(max_size: int = 4) -> tuple[FiniteQuantale, ...]:
    """All quantales with at most ``max_size`` elements, one per isomorphism class."""
    out: dict[tuple, FiniteQuantale] = {}
    for n in range(1, max_size + 1):
        for c in semilattices_up_to_iso(n):
            for table in mult_tables(c):
                q = FiniteQuantale(c, table)
                assert validate_quantale(q).ok
                out.setdefault(canonical_form(q), q)
    ordered = sorted(out.items(), key=lambda kv: (kv[1].size, kv[0]))
    return tuple(_relabel(q, "e") for _, q in ordered)


def count_labelled_quantales(n: int) -> int:
    """Definitional count of quantale structures on handles 0..n-1 (no canonical forms).

    Every join table on n labelled elements and every multiplication table
    are scanned directly and checked against the axioms.
    """
    count = 0
    for top in range(n):
        pairs = list(itertools.combinations(range(n), 2))
        for vals in itertools.product(range(n), repeat=len(pairs)):
            join = [[a if a == b else 0 for b in range(n)] for a in range(n)]
            for (a, b), v in zip(pairs, vals):
                join[a][b] = join[b][a] = v
            c = Carrier.from_table([str(i) for i in range(n)], join, top)
            if not validate_carrier(c).ok:
                continue
            others = [a for a in range(n) if a != top]
            mpairs = [(a, b) for a in others for b in others if a <= b]
            for mvals in itertools.product(range(n), repeat=len(mpairs)):
                mult = [[0] * n for _ in range(n)]
                for a in range(n):
                    mult[top][a] = mult[a][top] = a
                for (a, b), v in zip(mpairs, mvals):
                    mult[a][b] = mult[b][a] = v
                if validate_quantale(FiniteQuantale(c, tuple(map(tuple, mult)))).ok:
                    count += 1
    return count


def automorphism_weighted_count(n: int) -> int:
    """Number of labelled structures implied by the iso classes: sum of n!/|Aut|."""
    from math import factorial

    from ..quantale import automorphism_count

    return sum(
        factorial(n) // automorphism_count(q) for q in exhaustive_quantales(max(n, 1)) if q.size == n
    )


# ---------------------------------------------------------------- modules


def join_endomorphisms(c: Carrier) -> list[tuple[int, ...]]:
    n = c.size
    out = []
    for f in itertools.product(range(n), repeat=n):
        if all(f[c.join(a, b)] == c.join(f[a], f[b]) for a in range(n) for b in range(a + 1, n)):
            out.append(f)
    return out


def modules_over(q: FiniteQuantale, c: Carrier) -> list[FiniteQModule]:
    """Every Q-action on the carrier c: a unital hom from Q into join-endomorphisms."""
    ends = join_endomorphisms(c)
    n = c.size
    ident = tuple(range(n))
    order = [s for s in q.elements() if s != q.top]
    assign: dict[int, tuple[int, ...]] = {q.top: ident}
    found = []

    def consistent() -> bool:
        for s, es in assign.items():
            for t, et in assign.items():
                st = q.mult(s, t)
                if st in assign and assign[st] != tuple(es[et[x]] for x in range(n)):
                    return False
                sj = q.join(s, t)
                if sj in assign and assign[sj] != tuple(c.join(es[x], et[x]) for x in range(n)):
                    return False
        return True

    def rec(k: int) -> None:
        if k == len(order):
            action = tuple(assign[s] for s in q.elements())
            found.append(FiniteQModule(q, c, action))
            return
        s = order[k]
        for e in ends:
            assign[s] = e
            if consistent():
                rec(k + 1)
            del assign[s]

    rec(0)
    return found


@lru_cache(maxsize=None)
def exhaustive_modules(max_size: int = 4, max_q: int = 4) -> tuple[tuple[str, FiniteQModule], ...]:
    """Labelled modules: every exhaustive-tier quantale with every carrier of size <= max_size."""
    out = []
    for qi, q in enumerate(exhaustive_quantales(max_q)):
        for ms in range(1, max_size + 1):
            for ci, c in enumerate(semilattices_up_to_iso(ms)):
                for k, mod in enumerate(modules_over(q, c)):
                    assert validate_module(mod).ok
                    out.append((f"Q{qi}/M{ms}.{ci}/a{k}", mod))
    return tuple(out)


# ---------------------------------------------------------------- curated tier


def all_topologies(k: int) -> list[list[frozenset]]:
    pts = list(range(1, k + 1))
    universe = frozenset(pts)
    subsets = [frozenset(s) for r in range(len(pts) + 1) for s in itertools.combinations(pts, r)]
    middle = [s for s in subsets if s and s != universe]
    out = []
    for bits in range(1 << len(middle)):
        fam = {frozenset(), universe} | {middle[i] for i in range(len(middle)) if bits >> i & 1}
        if all(u | v in fam and u & v in fam for u in fam for v in fam):
            out.append(sorted(fam, key=lambda s: (len(s), sorted(s))))
    return out


def curated_corpus(max_size: int | None = None) -> list[Instance]:
    items: list[Instance] = []
    for kind in ("B", "L"):
        for n in range(1, 9):
            items.append(Instance(f"{kind}{n}", build_chain_family(kind, n), "curated"))
    for n in range(2, 61):
        items.append(Instance(f"Z{n}", build_ideal_quantale(n), "curated"))
    seen: set[tuple] = set()
    for k in range(1, 5):
        for t, fam in enumerate(all_topologies(k)):
            q = build_open_set_quantale(list(range(1, k + 1)), fam)
            key = canonical_form(q)
            if key in seen:
                continue
            seen.add(key)
            items.append(Instance(f"O{k}.{t}", q, "curated"))
    b1, l2, z6 = build_chain_family("B", 1), build_chain_family("L", 2), build_ideal_quantale(6)
    sier = build_open_set_quantale([1, 2], [[], [1], [1, 2]])
    for ident, a, b in (("B1xB1", b1, b1), ("B1xL2", b1, l2), ("L2xL2", l2, l2), ("Z6xB1", z6, b1), ("SxB1", sier, b1)):
        items.append(Instance(ident, product_quantale(a, b), "curated"))
    if max_size is not None:
        items = [i for i in items if i.q.size <= max_size]
    return items


# ---------------------------------------------------------------- random tier


def random_lattice(rng: random.Random, size: int) -> Carrier | None:
    """A random finite lattice with exactly ``size`` elements, or None."""
    ground = size
    fam = {frozenset()}
    attempts = 0
    while len(fam) < size and attempts < 200:
        attempts += 1
        s = frozenset(x for x in range(ground) if rng.random() < 0.4)
        new = set(fam)
        new.add(s)
        changed = True
        while changed:
            changed = False
            for u in list(new):
                for v in list(new):
                    if u | v not in new:
                        new.add(u | v)
                        changed = True
        if len(new) <= size:
            fam = new
    if len(fam) != size:
        return None
    elems = sorted(fam, key=lambda s: (len(s), sorted(s)))
    h = {s: i for i, s in enumerate(elems)}
    join = [[h[u | v] for v in elems] for u in elems]
    top = max(range(size), key=lambda i: len(elems[i]))
    return Carrier.from_table([str(i) for i in range(size)], join, top)


def random_quantale(rng: random.Random, size: int) -> FiniteQuantale | None:
    c = random_lattice(rng, size)
    if c is None:
        return None
    for table in mult_tables(c, rng=rng, limit=1, node_budget=5000):
        return FiniteQuantale(c, table)
    return None


def random_corpus(samples: int, seed: int, max_size: int = 8) -> list[Instance]:
    rng = random.Random(seed)
    out: list[Instance] = []
    tries = 0
    while len(out) < samples and tries < samples * 20:
        tries += 1
        size = rng.randint(2, max(2, max_size))
        q = random_quantale(rng, size)
        if q is not None and validate_quantale(q).ok:
            out.append(Instance(f"R{seed}.{len(out)}", _relabel(q, "r"), "random"))
    return out


def build_corpus(
    max_size: int = 4, samples: int = 0, seed: int = 0, curated_max: int | None = None, random_max: int = 8
) -> Corpus:
    return Corpus(
        curated=curated_corpus(curated_max),
        exhaustive=[Instance(f"E{i}", q, "exhaustive") for i, q in enumerate(exhaustive_quantales(max_size))],
        randomized=random_corpus(samples, seed, random_max) if samples else [],
    )
