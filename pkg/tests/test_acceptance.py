"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (the lines are printed even with
output capture on) or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction

import pytest

from qlab import rings
from qlab.coherence import (
    is_algebraic,
    is_blooming,
    is_continuous,
    is_precoherent,
    is_shrinkable,
    suspension_collapse_check,
)
from qlab.harness.applications import algebraic_baire_sweep
from qlab.harness.corpus import build_corpus, exhaustive_modules
from qlab.harness.suites import crt_instance, gluing_check
from qlab.interval import quantale as iq
from qlab.interval.baire import baire_witness
from qlab.interval.sets import IntervalSet, Space
from qlab.localization import is_binormal, is_one_step, localize, saturation, step_degree_at, xS_crosscheck
from qlab.mfilter import enumerate_mfilters, filter_product, minimal_filter
from qlab.oracles import one_step_definitional
from qlab.ordinal import OMEGA2, ExceedsBound, ord_min_steps, ordinal
from qlab.quantale import build_ideal_quantale, is_isomorphic

_CAPSYS = None


@pytest.fixture(autouse=True)
def _capture(capsys):
    global _CAPSYS
    _CAPSYS = capsys
    yield
    _CAPSYS = None


def report(n: int, ok: bool, text: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {text}"
    if _CAPSYS is not None:
        with _CAPSYS.disabled():
            print("\n" + line)
    else:
        print(line)


_CORPUS = None


def corpus():
    """Curated tier, exhaustive tier up to size 4, and a seeded random tier."""
    global _CORPUS
    if _CORPUS is None:
        _CORPUS = build_corpus(4, samples=20, seed=42, random_max=8)
    return _CORPUS


# ---------------------------------------------------------------- 1


def test_oracle_equivalence():
    start = time.perf_counter()
    mods = exhaustive_modules(4, 4)
    pairs = checks = bad = 0
    first = None
    for ident, mod in mods:
        for f in enumerate_mfilters(mod.q):
            pairs += 1
            d = saturation(mod, f)
            for a in range(mod.size):
                for b in range(mod.size):
                    checks += 1
                    if (one_step_definitional(mod, f, a, b) is not None) != mod.leq(a, d(b)):
                        bad += 1
                        first = first or (ident, f.labels(), a, b)
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed <= 300 and len(mods) > 0
    report(1, ok, f"{len(mods)} modules, {pairs} module/filter pairs, {checks} (a,b) checks, "
                  f"{bad} discrepancies, {elapsed:.1f}s (limit 300s){'' if first is None else f', first {first}'}")
    assert ok


# ---------------------------------------------------------------- 2


def test_ring_localization_crosscheck():
    q = build_ideal_quantale(12)
    h = q.carrier.index
    iso = []
    for s, expect in ((2, 3), (3, 4)):
        modulus = rings.ring_localization_modulus(12, [s])
        lq = localize(q, minimal_filter(q, h(f"({s})")))
        iso.append(modulus == expect and is_isomorphic(lq.quotient_quantale, build_ideal_quantale(modulus)))
    cases = bad = 0
    for n in range(2, 61):
        for s in range(n):
            cases += 1
            bad += not xS_crosscheck(n, [s])
        # two-element generating sets on a stride keep the sweep short
        for s, t in itertools.combinations(range(1, n, max(1, n // 8)), 2):
            cases += 1
            bad += not xS_crosscheck(n, [s, t])
    ok = all(iso) and bad == 0
    report(2, ok, f"Id(Z/12)_F(2) ~ Id(Z/3): {iso[0]}, Id(Z/12)_F(3) ~ Id(Z/4): {iso[1]}; "
                  f"xS cross-check {cases} generating sets for n <= 60, {bad} disagreements")
    assert ok


# ---------------------------------------------------------------- 3


def test_gluing_theorem():
    insts = corpus().up_to(4)
    pairs = triples = 0
    failures = []
    for inst in insts:
        fs = enumerate_mfilters(inst.q)
        for f, g in itertools.combinations_with_replacement(fs, 2):
            pairs += 1
            bad = gluing_check(inst.q, [f, g])
            if bad:
                failures.append((inst.ident, bad))
        for trip in itertools.combinations_with_replacement(fs, 3):
            triples += 1
            bad = gluing_check(inst.q, list(trip))
            if bad:
                failures.append((inst.ident, bad))
    crt = crt_instance()
    crt_ok = crt["bijective"] and crt["sizes"] == [3, 2] and crt["gluing"] is None
    ok = not failures and crt_ok
    report(3, ok, f"{len(insts)} instances of size <= 4, {pairs} filter pairs, {triples} triples, "
                  f"{len(failures)} failures; CRT Id(Z/12) -> 3-chain x 2-chain bijective: {crt_ok}")
    assert ok


# ---------------------------------------------------------------- 4


def test_filter_merge_bound():
    insts = corpus().all()
    checks = violations = degenerate = strays = 0
    for inst in insts:
        q = inst.q
        fs = enumerate_mfilters(q)
        for f, g in itertools.combinations_with_replacement(fs, 2):
            fg = filter_product(f, g)
            for b in q.elements():
                n, m = step_degree_at(q, f, b), step_degree_at(q, g, b)
                k = step_degree_at(q, fg, b)
                checks += 1
                if k > max(1, n) + max(1, m) - 1:
                    violations += 1
                elif k > n + m - 1:
                    # the unclamped bound can only fail at n = m = k = 0, where it reads 0 <= -1
                    degenerate += 1
                    strays += not (n == m == k == 0)
    ok = violations == 0 and strays == 0 and checks > 0
    report(4, ok, f"{len(insts)} corpus instances, {checks} (F, G, b) step counts, "
                  f"{violations} bound violations (step counts below 1 read as 1; "
                  f"{degenerate} cases with all counts 0 fail only the unclamped form)")
    assert ok


# ---------------------------------------------------------------- 5


def test_counterexample_reproductions():
    zero = ordinal(0, 0)
    exact = all(ord_min_steps(ordinal(n, 0), zero, bound=64) == n for n in range(1, 65))
    top = ord_min_steps(OMEGA2, zero, bound=64)
    ordinal_ok = exact and top == ExceedsBound(64)
    rep = iq.two_step_counterexample()
    interval_ok = rep["steps_empty_to_X"] == 2 and rep["has_preimage"] is False and not rep["one_step"]
    ok = ordinal_ok and interval_ok
    report(5, ok, f"(i) steps(n.w -> 0) = n for n <= 64: {exact}, w^2 -> 0 gives {top}; "
                  f"(ii) empty ~ X in {rep['steps_empty_to_X']} steps, (empty-class, X-class) preimage: "
                  f"{rep['has_preimage']} (gap {rep['incompatibility_points']})")
    assert ok


# ---------------------------------------------------------------- 6


def test_dense_filter_structure():
    space = Space.unit()
    opens = iq.random_grid_corpus(space, 1000, seed=2024)
    idem = all(iq.regularize(space, iq.regularize(space, b)) == iq.regularize(space, b) for b in opens)
    cls = [iq.dense_quotient_class(space, b) for b in opens]
    hb = [iq.hbar(space, b) for b in opens]
    # class equality <=> hbar equality over all pairs: the pairing is a bijection of values
    agree = len(set(zip(cls, hb))) == len(set(cls)) == len(set(hb))
    distinct = iq.dense_quotient_class(space, space.whole) != iq.dense_quotient_class(space, IntervalSet(()))
    ok = idem and agree and distinct
    report(6, ok, f"1000 grid opens, regularize idempotent: {idem}, class <=> hbar: {agree} "
                  f"({len(set(cls))} classes), class(X) != class(empty): {distinct}")
    assert ok


# ---------------------------------------------------------------- 7


def _nowhere_dense_lists(trials: int, seed: int):
    rng = random.Random(seed)
    for _ in range(trials):
        sets = []
        for _ in range(100):
            denom = rng.choice((7, 16, 64, 1000))
            sets.append(IntervalSet.points(Fraction(rng.randrange(denom + 1), denom) for _ in range(rng.randint(1, 5))))
        yield sets


def test_baire_witness():
    space = Space.unit()
    worst = 0.0
    avoid = det = True
    lists = list(_nowhere_dense_lists(10, seed=7))
    for sets in lists:
        t = time.perf_counter()
        p = baire_witness(space, sets)
        worst = max(worst, time.perf_counter() - t)
        avoid &= p in space.whole and all(p not in c for c in sets)
        det &= baire_witness(space, sets) == p
    ok = avoid and det and worst <= 1.0
    report(7, ok, f"{len(lists)} lists of 100 finite closed sets, avoids every set: {avoid}, "
                  f"deterministic: {det}, slowest {worst:.3f}s (limit 1s)")
    assert ok


# ---------------------------------------------------------------- 8


def test_algebraic_baire():
    t = time.perf_counter()
    rep = algebraic_baire_sweep(200)
    elapsed = time.perf_counter() - t
    ok = not rep["failures"] and elapsed <= 120 and rep["cases"] > 0
    report(8, ok, f"{rep['cases']} (n, radical b) cases for n <= 200, {len(rep['failures'])} failures, "
                  f"{elapsed:.2f}s (limit 120s)")
    assert ok


# ---------------------------------------------------------------- 9


def test_finite_triviality():
    insts = corpus().all()
    budget = {"sample_budget": 300, "seed": 0}
    bad = []
    filters = 0
    for inst in insts:
        q = inst.q
        for f in enumerate_mfilters(q):
            filters += 1
            if not (is_binormal(q, f) and is_one_step(q, f)):
                bad.append((inst.ident, "filter", f.labels()))
        c = q.carrier
        flags = {
            "shrinkable": is_shrinkable(c, **budget),
            "algebraic": is_algebraic(c, **budget),
            "precoherent": is_precoherent(q, **budget),
            "blooming": is_blooming(q, **budget),
            "continuous": is_continuous(c, **budget),
            "collapse": suspension_collapse_check(c, **budget)[0],
        }
        bad += [(inst.ident, k) for k, v in flags.items() if not v]
    ok = not bad
    report(9, ok, f"{len(insts)} corpus instances, {filters} filters binormal and 1-step; carriers shrinkable, "
                  f"algebraic, precoherent, blooming, continuous; suspension collapses; {len(bad)} failures")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
