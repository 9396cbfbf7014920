from __future__ import annotations

import itertools

import pytest

from qlab import rings
from qlab.harness.corpus import exhaustive_modules, exhaustive_quantales
from qlab.localization import (
    compose_localizations,
    gnf,
    is_binormal,
    is_conormal,
    is_normal,
    is_one_step,
    lcf,
    local_leq,
    localization_map,
    localize,
    saturate1,
    saturation,
    step_degree,
    xS_crosscheck,
    xS_discrepancies,
)
from qlab.mfilter import (
    CapExceeded,
    check_mfilter,
    codense_filter,
    comaximal_filter,
    enumerate_mfilters,
    filter_product,
    filter_sum,
    generate_filter,
    is_solid,
    make_filter,
    mf_quantale,
    minimal_filter,
    parse_filter_spec,
    trivial_filter,
    whole_filter,
)
from qlab.oracles import n_step_definitional, one_step_definitional
from qlab.order import InputError, mask_of
from qlab.quantale import (
    build_chain_family,
    build_ideal_quantale,
    build_open_set_quantale,
    is_idempotent,
    is_isomorphic,
    self_module,
    validate_quantale,
)


def h(q, label):
    return q.carrier.index(label)


Z12 = build_ideal_quantale(12)
SIER = build_open_set_quantale([1, 2], [[], [1], [1, 2]])


def _brute_filters(q):
    """Every subset of the carrier checked against the three m-filter conditions."""
    out = []
    for mask in range(1 << q.size):
        if check_mfilter(q, mask) is None:
            out.append(mask)
    return out


# ---------------------------------------------------------------- m-filters


def test_filter_examples():
    assert minimal_filter(Z12, h(Z12, "(2)")).labels() == ["(1)", "(2)", "(4)"]
    assert codense_filter(SIER, h(SIER, "{}")).labels() == ["{1}", "{1,2}"]
    assert comaximal_filter(Z12, h(Z12, "(2)")).labels() == ["(1)", "(3)"]
    assert trivial_filter(Z12).labels() == ["(1)"]
    assert len(whole_filter(Z12)) == 6


def test_make_filter_rejects_non_filters():
    with pytest.raises(InputError, match="contains-top"):
        make_filter(Z12, [h(Z12, "(2)")])
    with pytest.raises(InputError, match="upward-closed"):
        make_filter(Z12, [h(Z12, "(1)"), h(Z12, "(4)")])
    with pytest.raises(InputError, match="multiplicative"):
        make_filter(Z12, [h(Z12, "(1)"), h(Z12, "(2)")])


@pytest.mark.parametrize("q", [Z12, build_ideal_quantale(30), build_chain_family("L", 3), SIER])
def test_enumeration_matches_brute_force(q):
    assert sorted(f.members for f in enumerate_mfilters(q)) == sorted(_brute_filters(q))


def test_enumeration_counts():
    assert len(enumerate_mfilters(build_ideal_quantale(6))) == 4
    assert [f.labels() for f in enumerate_mfilters(Z12)] == [
        ["(1)"],
        ["(1)", "(3)"],
        ["(1)", "(2)", "(4)"],
        ["(1)", "(2)", "(3)", "(4)", "(6)", "(12)"],
    ]


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_mfilters(build_ideal_quantale(60), cap=2)


def test_generate_filter_is_least_containing_seeds():
    for q in (Z12, build_ideal_quantale(36), build_chain_family("B", 3)):
        filters = _brute_filters(q)
        for a, b in itertools.combinations(q.elements(), 2):
            seeds = mask_of([a, b])
            least = min((m for m in filters if m & seeds == seeds), key=lambda m: bin(m).count("1"))
            assert generate_filter(q, [a, b]).members == least


def test_minimal_filter_product_and_sum():
    q = build_ideal_quantale(60)
    for f, g in itertools.product(q.elements(), repeat=2):
        ff, fg = minimal_filter(q, f), minimal_filter(q, g)
        assert filter_sum(ff, fg) == minimal_filter(q, q.mult(f, g))
        assert check_mfilter(q, filter_product(ff, fg).members) is None


def test_mf_quantale_is_idempotent():
    for q in (Z12, build_ideal_quantale(6), build_chain_family("L", 2)):
        mf, filters = mf_quantale(q)
        assert validate_quantale(mf).ok
        assert is_idempotent(mf)
        assert mf.size == len(filters)
    mf6, _ = mf_quantale(build_ideal_quantale(6))
    assert mf6.size == 4


def test_finite_filters_are_solid():
    for q in (Z12, SIER, build_chain_family("L", 4)):
        assert all(is_solid(f) for f in enumerate_mfilters(q))


def test_filter_spec_language():
    assert parse_filter_spec(Z12, "min((2))").labels() == ["(1)", "(2)", "(4)"]
    assert parse_filter_spec(Z12, "min:(2)") == parse_filter_spec(Z12, "min((2))")
    both = parse_filter_spec(Z12, "sum(min((2)),min((3)))")
    assert both == whole_filter(Z12)
    assert parse_filter_spec(Z12, "prod(min((2)),min((3)))") == trivial_filter(Z12)
    assert parse_filter_spec(Z12, "gen((2),(3))") == whole_filter(Z12)
    assert parse_filter_spec(Z12, "trivial") == trivial_filter(Z12)
    for bad in ("min((2)", "nope((2))", "min()", "min((2),(3))", "min((5))"):
        with pytest.raises(InputError):
            parse_filter_spec(Z12, bad)


# ---------------------------------------------------------------- localization


def test_saturation_example():
    f = minimal_filter(Z12, h(Z12, "(2)"))
    assert Z12.names[saturate1(Z12, f, h(Z12, "(12)"))] == "(3)"
    lq = localize(Z12, f)
    assert lq.class_labels() == [["(1)", "(2)", "(4)"], ["(3)", "(6)", "(12)"]]
    assert is_isomorphic(lq.quotient_quantale, build_ideal_quantale(3))
    lq3 = localize(Z12, minimal_filter(Z12, h(Z12, "(3)")))
    assert is_isomorphic(lq3.quotient_quantale, build_ideal_quantale(4))


def test_oracle_agreement_on_small_modules():
    mods = [m for _, m in exhaustive_modules(3, 3)]
    assert mods
    for mod in mods:
        for f in enumerate_mfilters(mod.q):
            d = saturation(mod, f)
            for a, b in itertools.product(range(mod.size), repeat=2):
                fast = mod.leq(a, d(b))
                assert fast == (one_step_definitional(mod, f, a, b) is not None)


def test_witness_families_are_valid():
    mod = self_module(Z12)
    f = minimal_filter(Z12, h(Z12, "(2)"))
    a, b = h(Z12, "(3)"), h(Z12, "(12)")
    wit = one_step_definitional(mod, f, a, b)
    assert wit is not None
    assert mod.leq(a, mod.carrier.join_set([x for x, _ in wit]))
    assert all(s in f and mod.leq(mod.act(s, x), b) for x, s in wit)
    assert one_step_definitional(mod, f, h(Z12, "(1)"), b) is None


def test_n_step_matches_local_leq():
    q = build_chain_family("L", 3)
    for f in enumerate_mfilters(q):
        mod = self_module(q)
        for a, b in itertools.product(q.elements(), repeat=2):
            n = local_leq(q, f, a, b)
            for k in range(3):
                assert n_step_definitional(mod, f, a, b, k) == (n is not None and n <= k)


def test_finite_step_degrees():
    for q in exhaustive_quantales(4):
        for f in enumerate_mfilters(q):
            assert is_one_step(q, f)
            assert step_degree(q, f) <= 1


def test_trivial_filter_localization_is_identity():
    for q in (Z12, SIER, build_chain_family("L", 3)):
        lq = localize(q, trivial_filter(q))
        assert lq.size == q.size
        assert lq.quotient_quantale.mult_table == q.mult_table


def test_whole_filter_collapses():
    assert localize(Z12, whole_filter(Z12)).size == 1


def test_localization_map_and_composition():
    q = build_ideal_quantale(30)
    f2 = minimal_filter(q, h(q, "(2)"))
    f3 = minimal_filter(q, h(q, "(3)"))
    lf = localize(q, f2)
    lg = localize(q, filter_sum(f2, f3))
    m = localization_map(q, f2, filter_sum(f2, f3))
    assert len(m) == lf.size and set(m) == set(range(lg.size))
    with pytest.raises(InputError):
        localization_map(q, filter_sum(f2, f3), f2)
    comp = compose_localizations(q, f2, f3)
    assert comp["size"] == lg.size == 2


def test_wedge_preservation():
    q = build_ideal_quantale(36)
    for f in enumerate_mfilters(q):
        lq = localize(q, f)
        for a, b in itertools.product(q.elements(), repeat=2):
            m = q.carrier.meet(a, b)
            assert lq.project(m) == lq.quotient_module.carrier.meet(lq.project(a), lq.project(b))


def test_normal_conormal_finite():
    for q in (Z12, SIER, build_chain_family("L", 3), build_ideal_quantale(30)):
        for f in enumerate_mfilters(q):
            assert is_normal(q, f) and is_conormal(q, f) and is_binormal(q, f)
            assert gnf(q, f) == f and lcf(q, f) == f


# ---------------------------------------------------------------- ring cross-check


def test_xS_examples():
    assert xS_discrepancies(6, [1, 5]) == []
    assert xS_crosscheck(12, [2])
    assert xS_crosscheck(12, [3])


@pytest.mark.parametrize("n", range(2, 61))
def test_xS_single_generators(n):
    for s in range(n):
        assert xS_crosscheck(n, [s]), (n, s)


def test_ring_localization_modulus_examples():
    assert rings.ring_localization_modulus(12, [2]) == 3
    assert rings.ring_localization_modulus(12, [3]) == 4
    assert rings.ring_localization_modulus(6, [1, 5]) == 6
