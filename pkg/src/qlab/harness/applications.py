"""Applications brute-forced on ideal quantales of Z/n and on finite topologies."""

from __future__ import annotations

import itertools
from math import gcd

from .. import rings
from ..localization import is_one_step, localize
from ..mfilter import MFilter, codense_filter, generate_filter, product_of_filters
from ..order import InputError, iter_bits, mask_of
from ..quantale import build_ideal_quantale, build_open_set_quantale, is_isomorphic


def algebraic_baire(n: int, b: int) -> dict:
    """Search the maximal ideal m and r outside b asserted for a radical b in Z/n.

    The requirement on r: r x lies in b for every x with (1 - a) x in b for
    some a in m. Returns the first witness pair in (m, r) order, or a
    counterexample report.
    """
    if n < 2:
        raise InputError("Z/n needs n >= 2")
    if n % b or b == 1:
        raise InputError(f"(b) must be a proper ideal of Z/{n}, given by a divisor b > 1 of n")
    if not rings.is_radical(n, b):
        raise InputError(f"({b}) is not a radical ideal of Z/{n}")
    ideal_b = rings.ideal_elements(n, b)
    for p in rings.maximal_ideals(n):
        m = rings.ideal_elements(n, p)
        qualifying = [x for x in range(n) if any(((1 - a) * x) % n in ideal_b for a in m)]
        for r in range(n):
            if r in ideal_b:
                continue
            if all((r * x) % n in ideal_b for x in qualifying):
                return {"n": n, "b": b, "found": True, "m": p, "r": r, "qualifying": len(qualifying)}
    return {"n": n, "b": b, "found": False}


def radical_ideals(n: int) -> list[int]:
    """Proper radical ideals of Z/n, as divisors d > 1 of n."""
    return [d for d in range(2, n + 1) if n % d == 0 and rings.is_radical(n, d)]


def algebraic_baire_sweep(max_n: int = 200) -> dict:
    failures, cases = [], 0
    for n in range(2, max_n + 1):
        for b in radical_ideals(n):
            cases += 1
            rep = algebraic_baire(n, b)
            if not rep["found"]:
                failures.append((n, b))
    return {"max_n": max_n, "cases": cases, "failures": failures}


def spec_injectivity(n: int, gens: list[int]) -> dict:
    """Id(Z/n) -> prod Id(Z/n)_{F_(f_i)} is injective when (f_1, ..., f_k) = (1)."""
    if not gens:
        raise InputError("need at least one generator")
    g = n
    for f in gens:
        g = gcd(g, f)
    if g != 1:
        raise InputError(f"generators {gens} do not generate the unit ideal of Z/{n}")
    q = build_ideal_quantale(n)
    h = {int(name.strip("()")): i for i, name in enumerate(q.names)}
    filters = [generate_filter(q, [h[gcd(f, n)]]) for f in gens]
    locs = [localize(q, f) for f in filters]
    images = {tuple(lq.project(x) for lq in locs) for x in q.elements()}
    product_size = 1
    for lq in locs:
        product_size *= lq.size
    # independent ring side: the kernels of Z/n -> (Z/n)_{f_i} meet in zero
    kernels = [{x for x in range(n) if any((pow(f, k, n) * x) % n == 0 for k in range(n.bit_length() + 1))} for f in gens]
    ring_injective = set.intersection(*kernels) == {0}
    return {
        "n": n,
        "generators": list(gens),
        "filter_product_trivial": product_of_filters(filters).members == 1 << q.top,
        "injective": len(images) == q.size,
        "image_size": len(images),
        "product_size": product_size,
        "bijective": len(images) == q.size == product_size,
        "ring_injective": ring_injective,
        "local_sizes": [lq.size for lq in locs],
    }


def _discrete(k: int):
    pts = list(range(1, k + 1))
    opens = [frozenset(c) for r in range(k + 1) for c in itertools.combinations(pts, r)]
    return pts, opens


def _open_of(q, a: int) -> frozenset:
    label = q.names[a].strip("{}")
    return frozenset(int(p) for p in label.split(",") if p)


def subset_filter_check(k: int, Y) -> dict:
    """On the discrete k-point space, F = {U : Y inside U} is 1-step and
    U ~ V in the localization exactly when U and V meet Y in the same set."""
    Y = frozenset(Y)
    pts, opens = _discrete(k)
    if not Y <= frozenset(pts):
        raise InputError("Y must be a subset of the points")
    return topology_subset_check(pts, opens, Y)


def topology_subset_check(pts, opens, Y) -> dict:
    q = build_open_set_quantale(pts, opens)
    sets = [_open_of(q, a) for a in q.elements()]
    f = MFilter(q, mask_of(a for a in q.elements() if Y <= sets[a]))
    lq = localize(q, f)
    same = all(
        (lq.class_rep[a] == lq.class_rep[b]) == (sets[a] & Y == sets[b] & Y)
        for a in q.elements()
        for b in q.elements()
    )
    # the quotient should be the opens of Y with the subspace topology
    sub = sorted({frozenset(s & Y) for s in sets}, key=lambda s: (len(s), sorted(s)))
    oy = build_open_set_quantale(sorted(Y), sub) if Y else None
    iso = lq.quotient_quantale.size == 1 if oy is None else is_isomorphic(lq.quotient_quantale, oy)
    return {"one_step": is_one_step(q, f), "classes_match_traces": same, "quotient_is_O(Y)": iso, "classes": lq.size}


def codense_description_check(pts, opens) -> list[str]:
    """Compare the codense filter at every open V with {U : U n V^c dense in V^c}.

    Returns the labels of the V where the two disagree.
    """
    q = build_open_set_quantale(pts, opens)
    sets = [_open_of(q, a) for a in q.elements()]
    universe = frozenset(pts)
    bad = []
    for v in q.elements():
        rest = universe - sets[v]
        described = set()
        for u in q.elements():
            trace = sets[u] & rest
            # dense in the subspace: every open meeting rest meets the trace
            if all(not (w & rest) or (w & trace) for w in sets):
                described.add(u)
        if set(iter_bits(codense_filter(q, v).members)) != described:
            bad.append(q.names[v])
    return bad
