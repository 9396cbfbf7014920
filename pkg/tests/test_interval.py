from __future__ import annotations

import random
import time
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlab.interval import quantale as iq
from qlab.interval.baire import baire_witness, check_nowhere_dense, parse_closed_set
from qlab.interval.sets import IntervalSet, Space, make_open
from qlab.order import InputError

X01 = Space.unit()
TWO = Space.of([(0, 1), (2, 3)])
HALF = Fr(1, 2)
LEFT = IntervalSet.of((0, HALF, True, False))  # [0,1/2)
EMPTY = IntervalSet(())

ticks = st.integers(0, 16).map(lambda k: Fr(k, 16))
part = st.tuples(ticks, ticks, st.booleans(), st.booleans()).map(
    lambda t: (min(t[0], t[1]), max(t[0], t[1]), t[2], t[3])
)
isets = st.lists(part, max_size=4).map(lambda ps: IntervalSet.of(*ps))
# probe points: the grid, midpoints between grid points, and off-grid points
PROBES = [Fr(k, 32) for k in range(-2, 35)]


def _raw_member(parts, x):
    return any(
        lo < x < hi or (x == lo and lc and (lo < hi or hc)) or (x == hi and hc and (lo < hi or lc))
        for lo, hi, lc, hc in parts
    )


# ---------------------------------------------------------------- set algebra


@settings(max_examples=150, deadline=None)
@given(st.lists(part, max_size=4))
def test_normalisation_preserves_membership(parts):
    s = IntervalSet.of(*parts)
    assert all((x in s) == _raw_member(parts, x) for x in PROBES)


@settings(max_examples=150, deadline=None)
@given(isets, isets)
def test_boolean_ops_pointwise(a, b):
    for x in PROBES:
        assert (x in (a | b)) == (x in a or x in b)
        assert (x in (a & b)) == (x in a and x in b)
        assert (x in (a - b)) == (x in a and x not in b)


@settings(max_examples=150, deadline=None)
@given(isets)
def test_closure_interior_pointwise(a):
    cl, it = a.closure(), a.interior()
    eps = Fr(1, 1000)
    for x in PROBES:
        near = [x - eps, x, x + eps]
        assert (x in cl) == (x in a or any(y in a for y in (x - eps, x + eps)))
        assert (x in it) == all(y in a for y in near)
    assert a.interior() <= a <= a.closure()
    assert a.closure().closure() == a.closure()


def test_space_relative_topology():
    assert X01.is_open(LEFT)
    assert not X01.is_open(IntervalSet.closed(0, HALF))
    assert X01.interior(IntervalSet.closed(0, HALF)) == LEFT
    assert X01.is_dense(X01.whole - IntervalSet.point(HALF))
    assert TWO.is_open(IntervalSet.closed(0, 1))  # a whole segment is clopen
    with pytest.raises(InputError):
        Space.of([(0, 2), (1, 3)])
    with pytest.raises(InputError):
        make_open(X01, [(0, HALF, True, True)])


def test_json_round_trip():
    s = IntervalSet.of((0, HALF, True, False), (Fr(3, 4), 1, False, True))
    assert IntervalSet.from_json(s.to_json()) == s
    assert str(s) == "[0,1/2) u (3/4,1]"
    with pytest.raises(InputError):
        IntervalSet.from_json([[0, 1, "yes", True]])


# ---------------------------------------------------------------- closed forms


FAMILIES = [
    iq.Above(LEFT),
    iq.Comax(LEFT),
    iq.Dense(),
    iq.ContainsPoints(IntervalSet.points([Fr(1, 4), Fr(3, 4)])),
    iq.SumOf((iq.Above(LEFT), iq.Comax(LEFT))),
]


@pytest.mark.parametrize("f", FAMILIES, ids=iq.describe)
def test_closed_forms_sound_and_attained(f):
    rng = random.Random(3)
    for b in iq.random_grid_corpus(X01, 15, seed=11):
        rep = iq.validate_closed_form(X01, f, b, rng, probes=60)
        assert rep["sound"] and rep["attained"], rep


def test_closed_form_values():
    assert iq.saturate(X01, iq.Above(LEFT), EMPTY) == IntervalSet.of((HALF, 1, False, True))
    assert iq.saturate(X01, iq.Comax(LEFT), EMPTY) == LEFT
    assert iq.saturate(X01, iq.Dense(), X01.whole - IntervalSet.point(HALF)) == X01.whole


def test_membership_predicates():
    assert iq.contains(X01, iq.Comax(LEFT), IntervalSet.of((Fr(1, 4), 1, False, True)))
    assert not iq.contains(X01, iq.Comax(LEFT), IntervalSet.of((HALF, 1, False, True)))
    assert iq.contains(X01, iq.Dense(), X01.whole - IntervalSet.point(HALF))
    with pytest.raises(iq.Unsupported):
        iq.saturate(X01, iq.SumOf((iq.Dense(), iq.Dense())), EMPTY)


def test_two_step_example():
    rep = iq.two_step_counterexample()
    assert rep["steps_empty_to_X"] == 2
    assert not rep["one_step"]
    assert rep["has_preimage"] is False
    assert rep["incompatibility_points"] == "{1/2}"
    assert rep["product_filter_is_trivial"] and rep["sum_localization_trivial"]
    assert rep["orbit_of_empty"] == ["{}", "[0,1/2) u (1/2,1]", "[0,1]"]


def test_dense_quotient_classes():
    opens = iq.random_grid_corpus(X01, 300, seed=5)
    cls = [iq.dense_quotient_class(X01, b) for b in opens]
    hb = [iq.hbar(X01, b) for b in opens]
    for i in range(len(opens)):
        assert iq.regularize(X01, cls[i]) == cls[i]
        for j in range(i + 1, len(opens)):
            assert (cls[i] == cls[j]) == (hb[i] == hb[j])
    assert iq.dense_quotient_class(X01, X01.whole) != iq.dense_quotient_class(X01, EMPTY)


def test_solidity():
    assert iq.is_solid_interval(X01, iq.Comax(LEFT))[0]
    assert iq.is_solid_interval(X01, iq.Above(X01.whole))[0]
    ok, cert = iq.is_solid_interval(X01, iq.Above(LEFT))
    assert not ok and cert["refuting_family"]
    ok, cert = iq.is_solid_interval(X01, iq.Dense())
    assert not ok and cert["prefix_length"] != cert["space_length"]
    # every finite prefix of the rational cover is too short to be dense
    cover = iq.rational_cover(X01, 40)
    union = EMPTY
    for x in cover:
        union = union | x
    assert union.length() < 1


def test_normality_and_conormality():
    assert iq.is_normal_interval(X01, iq.Comax(LEFT))[0]
    assert not iq.is_normal_interval(X01, iq.Above(LEFT))[0]
    assert iq.is_normal_interval(TWO, iq.Above(IntervalSet.closed(0, 1)))[0]
    assert iq.is_conormal_interval(X01, iq.Dense())[0]
    assert iq.is_conormal_interval(X01, iq.Above(LEFT))[0]
    ok, cert = iq.is_conormal_interval(X01, iq.Comax(LEFT))
    assert not ok and cert["boundary_point"] == "1/2"


def test_normal_witness_decomposition():
    f = iq.Comax(LEFT)
    s = IntervalSet.of((Fr(1, 4), 1, False, True))
    m = X01.whole
    fam = [IntervalSet.of((0, Fr(3, 8), True, False)), IntervalSet.of((Fr(1, 4), 1, False, True))]
    pieces = iq.normal_witness(X01, f, s, m, fam)
    assert iq.check_normal_witness(X01, f, m, fam, pieces)


def test_conormal_witness_for_dense():
    x = X01.whole
    y = X01.whole - IntervalSet.point(HALF)
    s = iq.conormal_witness(X01, x, y)
    assert X01.is_dense(s) and (s & x) <= y


def test_gnf_rules():
    assert iq.gnf_interval(X01, iq.Comax(LEFT)) == iq.Comax(LEFT)
    g = iq.gnf_interval(X01, iq.Above(LEFT))
    assert g == iq.Comax(IntervalSet.of((HALF, 1, False, True)))
    # the greatest normal filter sits inside Above(U)
    assert iq.containment_witness(X01, g, iq.Above(LEFT)) is None
    # the literal Above(int U^c) is not inside Comax(U)
    w = iq.containment_witness(X01, iq.Above(IntervalSet.of((HALF, 1, False, True))), iq.Comax(LEFT))
    assert w == IntervalSet.of((HALF, 1, False, True))
    assert iq.gnf_interval(X01, iq.Above(X01.whole)) == iq.Comax(EMPTY)


# ---------------------------------------------------------------- Baire


def test_baire_examples():
    assert baire_witness(X01, []) == HALF
    assert baire_witness(X01, [IntervalSet.points([0, HALF, 1])]) == Fr(1, 4)
    with pytest.raises(InputError, match="interior"):
        check_nowhere_dense(X01, IntervalSet.closed(0, HALF))
    with pytest.raises(InputError):
        parse_closed_set(X01, [[0, HALF, True, False]])


def test_baire_random_sets_avoided():
    rng = random.Random(9)
    sets = [
        IntervalSet.points([Fr(rng.randrange(65), 64) for _ in range(3)]) for _ in range(100)
    ]
    t = time.perf_counter()
    p = baire_witness(X01, sets)
    assert time.perf_counter() - t < 1.0
    assert p in X01.whole
    assert all(p not in c for c in sets)
    assert baire_witness(X01, sets) == p


def test_baire_two_segments():
    p = baire_witness(TWO, [IntervalSet.points([Fr(1, 2), Fr(5, 2)])])
    assert p in TWO.whole and p not in (Fr(1, 2), Fr(5, 2))
