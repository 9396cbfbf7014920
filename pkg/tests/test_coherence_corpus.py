from __future__ import annotations

import itertools

from qlab.coherence import (
    SuspensionClass,
    adjunction_check,
    coherence_report,
    compact_elements,
    cover_witness,
    iota,
    is_shrinkable,
    meet_theorem_check,
    selective_base_check,
    sigma,
    sigma_flat,
    suspension_collapse_check,
    suspension_leq,
    suspension_meet,
)
from qlab.harness.corpus import (
    all_topologies,
    automorphism_weighted_count,
    build_corpus,
    count_labelled_quantales,
    curated_corpus,
    exhaustive_modules,
    exhaustive_quantales,
    random_corpus,
    semilattices_up_to_iso,
)
from qlab.order import iter_bits, validate_carrier
from qlab.quantale import (
    build_chain_family,
    build_ideal_quantale,
    build_open_set_quantale,
    is_isomorphic,
    validate_module,
    validate_quantale,
)

B3 = build_chain_family("B", 3).carrier
Z12 = build_ideal_quantale(12)


def _leq_brute(c, S, T):
    """S below T when each s is below the join of some nonempty subset of T."""
    ts = list(iter_bits(T))
    subs = [sub for k in range(1, len(ts) + 1) for sub in itertools.combinations(ts, k)]
    return all(any(c.leq(s, c.join_set(sub)) for sub in subs) for s in iter_bits(S))


# ---------------------------------------------------------------- suspension


def test_suspension_preorder_matches_brute_force():
    for c in (B3, Z12.carrier):
        n = c.size
        for S, T in itertools.product(range(1, 1 << n), repeat=2):
            assert suspension_leq(c, S, T) == _leq_brute(c, S, T)


def test_cover_witness_is_smallest():
    c = Z12.carrier
    two, three, one = c.index("(2)"), c.index("(3)"), c.index("(1)")
    T = (1 << two) | (1 << three)
    w = cover_witness(c, one, T)
    assert w == T
    assert cover_witness(c, c.index("(4)"), T) == 1 << two
    assert cover_witness(c, one, 1 << two) is None


def test_sigma_iota():
    assert sigma(B3, 0b0110) == 2
    assert iota(B3, 2) == 1 << 2
    for x in range(B3.size):
        assert sigma(B3, iota(B3, x)) == x


def test_finite_collapse_and_adjunction():
    for c in (B3, Z12.carrier, build_open_set_quantale([1, 2], [[], [1], [1, 2]]).carrier):
        ok, bad = suspension_collapse_check(c)
        assert ok and bad is None
        assert adjunction_check(c)
        assert meet_theorem_check(c)
        assert is_shrinkable(c)
        for a in range(c.size):
            flat = sigma_flat(c, a)
            assert flat is not None and sigma(c, flat) == a


def test_suspension_class_matches_equivalence():
    c = Z12.carrier
    for S in range(1, 1 << c.size):
        for T in range(1, 1 << c.size):
            same = suspension_leq(c, S, T) and suspension_leq(c, T, S)
            assert same == (SuspensionClass.of(c, S) == SuspensionClass.of(c, T))


def test_suspension_meet_is_glb():
    c = B3
    for S, T in itertools.product(range(1, 1 << c.size), repeat=2):
        m = suspension_meet(c, S, T)
        assert m is not None
        assert suspension_leq(c, m, S) and suspension_leq(c, m, T)


def test_compact_elements_and_reports():
    assert len(compact_elements(Z12.carrier)) == 6
    for q in (build_chain_family("L", 3), Z12):
        rep = coherence_report(q)
        assert all(rep[k] for k in ("algebraic", "precoherent", "coherent", "blooming", "continuous", "shrinkable"))


def test_selective_base():
    assert selective_base_check(Z12, list(Z12.elements()))
    # {(1)} alone spans nothing but the top
    assert not selective_base_check(Z12, [Z12.top])


# ---------------------------------------------------------------- corpus


def test_semilattice_counts():
    assert [len(semilattices_up_to_iso(n)) for n in range(1, 5)] == [1, 1, 2, 5]
    for n in range(1, 5):
        for c in semilattices_up_to_iso(n):
            assert validate_carrier(c).ok


def test_exhaustive_quantale_counts():
    qs = exhaustive_quantales(4)
    assert len(qs) == 11
    assert [sum(1 for q in qs if q.size == n) for n in range(1, 5)] == [1, 1, 2, 7]
    for a, b in itertools.combinations(qs, 2):
        if a.size == b.size:
            assert not is_isomorphic(a, b)


def test_labelled_count_matches_orbit_sum():
    # direct scan of labelled tables against the orbit-stabilizer count of the iso classes
    for n in (1, 2, 3):
        assert count_labelled_quantales(n) == automorphism_weighted_count(n)
    assert count_labelled_quantales(3) == 12


def test_exhaustive_modules():
    mods = exhaustive_modules(4, 4)
    assert len(mods) == 538
    assert all(validate_module(m).ok for _, m in mods[:60])
    assert len({ident for ident, _ in mods}) == len(mods)


def test_topologies():
    assert [len(all_topologies(k)) for k in (1, 2, 3)] == [1, 4, 29]


def test_curated_corpus():
    items = curated_corpus()
    idents = {i.ident for i in items}
    assert {"B1", "L8", "Z2", "Z60", "B1xB1"} <= idents
    assert all(validate_quantale(i.q).ok for i in items)
    assert all(i.q.size <= 4 for i in curated_corpus(4))


def test_random_corpus_seeded():
    a = random_corpus(10, seed=7)
    b = random_corpus(10, seed=7)
    assert [i.q for i in a] == [i.q for i in b]
    assert all(validate_quantale(i.q).ok for i in a)
    assert len(a) == 10


def test_build_corpus_tiers():
    c = build_corpus(3, samples=5, seed=1)
    assert {i.tier for i in c.all()} == {"curated", "exhaustive", "random"}
    assert all(i.q.size <= 3 for i in c.up_to(3))
