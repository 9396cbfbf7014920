from __future__ import annotations

import pytest

from qlab import rings
from qlab.harness.applications import (
    algebraic_baire,
    algebraic_baire_sweep,
    codense_description_check,
    radical_ideals,
    spec_injectivity,
    subset_filter_check,
)
from qlab.harness.corpus import all_topologies
from qlab.order import InputError
from qlab.ordinal import (
    BOTTOM,
    OMEGA2,
    TOP,
    ExceedsBound,
    OrdElem,
    integer,
    nonlocalizability_report,
    ord_join,
    ord_min_steps,
    ord_mult,
    ord_saturate1,
    ordinal,
    sample_grid,
    saturation_certificate,
)

SHIFTS = [integer(-k) for k in range(0, 41)]


def _admissible_brute(x, b):
    return any(ord_mult(s, x) <= b for s in SHIFTS)


def _least_upper_bound_brute(b, candidates):
    """Least candidate dominating every admissible element of a much finer grid.

    Admissible elements b.w + c exist for every c, so a candidate in the same
    w-column is beaten by a larger c from the fine grid.
    """
    adm = [x for x in sample_grid(32) if _admissible_brute(x, b)]
    ubs = [u for u in candidates if all(x <= u for x in adm)]
    return min(ubs)


# ---------------------------------------------------------------- ordinal example


def test_element_order_and_validation():
    assert BOTTOM < ordinal(0, 0) < ordinal(0, 5) < ordinal(1, 0) < OMEGA2 < integer(-9) < TOP
    assert str(ordinal(2, 3)) == "2w+3" and str(ordinal(1, 0)) == "w" and str(OMEGA2) == "w^2"
    with pytest.raises(InputError):
        integer(1)
    with pytest.raises(InputError):
        OrdElem(1, a=1, b=1)
    with pytest.raises(InputError):
        OrdElem(3)


def test_multiplication_table():
    assert ord_mult(integer(-2), integer(-3)) == integer(-5)
    assert ord_mult(integer(-2), ordinal(1, 5)) == ordinal(1, 3)
    assert ord_mult(ordinal(1, 1), integer(-4)) == ordinal(1, 0)
    assert ord_mult(ordinal(1, 0), ordinal(0, 3)) == BOTTOM
    assert ord_mult(TOP, OMEGA2) == OMEGA2
    assert ord_join(ordinal(2, 0), integer(-7)) == integer(-7)


def test_quantale_axioms_on_grid():
    grid = sample_grid(3)
    for x in grid:
        assert ord_mult(TOP, x) == x
        for y in grid:
            assert ord_mult(x, y) == ord_mult(y, x)
            assert ord_mult(x, y) <= x
            for z in grid:
                assert ord_mult(ord_mult(x, y), z) == ord_mult(x, ord_mult(y, z))
                # binary distributivity over joins in a chain
                assert ord_mult(x, ord_join(y, z)) == ord_join(ord_mult(x, y), ord_mult(x, z))


@pytest.mark.parametrize("b", [integer(-3), ordinal(0, 0), ordinal(0, 4), ordinal(3, 2), OMEGA2, BOTTOM])
def test_saturation_matches_brute_force(b):
    grid = sample_grid(8) + [ord_saturate1(b)]
    assert _least_upper_bound_brute(b, grid) == ord_saturate1(b)


def test_saturation_values():
    assert ord_saturate1(integer(-5)) == TOP
    assert ord_saturate1(ordinal(2, 7)) == ordinal(3, 0)
    assert ord_saturate1(OMEGA2) == OMEGA2
    assert ord_saturate1(BOTTOM) == BOTTOM


def test_certificates():
    for b in (integer(-3), ordinal(0, 0), ordinal(2, 5), OMEGA2):
        cert = saturation_certificate(b)
        assert cert["positive"] and cert["negative"] and cert["tight"]
    fam = saturation_certificate(ordinal(0, 0))["family"]
    assert fam[2] == {"x": "2", "s": "-2"}


def test_step_counts_grow_without_bound():
    for n in range(1, 65):
        assert ord_min_steps(ordinal(n, 0), ordinal(0, 0), bound=128) == n
    assert ord_min_steps(OMEGA2, ordinal(0, 0)) == ExceedsBound(64)
    assert str(ExceedsBound(64)) == "ExceedsBound(64)"
    with pytest.raises(InputError):
        ord_min_steps(OMEGA2, BOTTOM, bound=0)
    rep = nonlocalizability_report(8)
    assert rep["steps_equal_n"] and not rep["uniform_bound_exists"]
    assert rep["w2_to_0"] == "ExceedsBound(64)"
    assert rep["rows"][2]["chain"] == ["3w", "2w", "w", "0"]


# ---------------------------------------------------------------- ring applications


def test_algebraic_baire_examples():
    rep = algebraic_baire(6, 6)
    assert rep["found"]
    r, m = rep["r"], rep["m"]
    assert r % 6 != 0 and m in (2, 3)
    assert algebraic_baire(30, 2)["found"]
    for n, b in ((12, 4), (1, 1), (12, 5), (12, 1)):
        with pytest.raises(InputError):
            algebraic_baire(n, b)


def test_radical_ideals():
    assert radical_ideals(12) == [2, 3, 6]
    assert radical_ideals(7) == [7]
    assert all(rings.is_radical(30, d) for d in radical_ideals(30))


def test_algebraic_baire_sweep_small():
    rep = algebraic_baire_sweep(60)
    assert rep["failures"] == []
    assert rep["cases"] == sum(len(radical_ideals(n)) for n in range(2, 61))


def test_spec_injectivity():
    rep = spec_injectivity(12, [3, 4])
    assert rep["local_sizes"] == [3, 2]
    assert rep["injective"] and rep["bijective"] and rep["ring_injective"]
    assert rep["filter_product_trivial"]
    rep = spec_injectivity(30, [6, 10, 15])
    assert rep["local_sizes"] == [2, 2, 2] and rep["product_size"] == 8 and rep["injective"]
    with pytest.raises(InputError):
        spec_injectivity(12, [2, 4])


def test_subset_filter():
    rep = subset_filter_check(3, {1, 2})
    assert rep == {"one_step": True, "classes_match_traces": True, "quotient_is_O(Y)": True, "classes": 4}
    assert subset_filter_check(2, set())["classes"] == 1
    with pytest.raises(InputError):
        subset_filter_check(2, {3})


def test_codense_description_small_topologies():
    for k in (1, 2, 3):
        pts = list(range(1, k + 1))
        for fam in all_topologies(k):
            assert codense_description_check(pts, fam) == []
