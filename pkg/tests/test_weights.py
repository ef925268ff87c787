"""Root data, weights, pairing, Weyl group, heights, atypicality."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superdirac.weights import (
    Weight,
    atypicality_set,
    build_root_datum,
    dot_action,
    harish_chandra_condition,
    pairing,
    parse_weight,
    same_infinitesimal_character,
)

small_rats = st.integers(-4, 4).map(Fraction)


def weight_strategy(m, n):
    return st.tuples(
        st.tuples(*([small_rats] * m)), st.tuples(*([small_rats] * n))
    ).map(lambda t: Weight.make(t[0], t[1]))


# ----- construction and validation ------------------------------------------------
def test_rank_too_small_rejected():
    with pytest.raises(ValueError):
        build_root_datum(1, 1, 1, 0)


def test_pq_must_partition_m():
    with pytest.raises(ValueError):
        build_root_datum(2, 1, 2, 1)


def test_m_greater_than_n_is_tagged(d21, d23):
    assert d21.warnings  # m=2 > n=1
    assert not d23.warnings  # m=2 <= n=3


def test_equal_rank_needs_zero_central_charge():
    d22 = build_root_datum(2, 2, 1, 1)
    bad = parse_weight("1,0|1,0", 2, 2)  # sum eps + sum del = 2 != 0
    assert not d22.admissible_highest_weight(bad)
    ok = parse_weight("1,0|-1,0", 2, 2)
    assert d22.admissible_highest_weight(ok)


def test_root_counts(d21, d23):
    assert (len(d21.pos_even), len(d21.pos_odd)) == (1, 2)
    assert (len(d21.pos_compact), len(d21.pos_noncompact)) == (0, 1)
    assert (len(d23.pos_even), len(d23.pos_odd)) == (4, 6)
    assert (len(d23.pos_compact), len(d23.pos_noncompact)) == (3, 1)


def test_weyl_vectors(d21, d23):
    assert d21.rho0.text() == "1/2,-1/2|0"
    assert d21.rho1.text() == "1/2,-1/2|0"
    assert d21.rho.text() == "0,0|0"
    assert d23.rho1.text() == "3/2,-3/2|0,0,0"
    assert d23.rho.text() == "-1,1|1,0,-1"
    assert (d23.rho0 - d23.rho - d23.rho1).is_zero()


def test_parse_weight_roundtrip():
    w = parse_weight("-2,1/3|5", 2, 1)
    assert w.eps == (Fraction(-2), Fraction(1, 3))
    assert w.del_ == (Fraction(5),)
    assert parse_weight(w.text(), 2, 1) == w


def test_parse_weight_errors():
    with pytest.raises(ValueError):
        parse_weight("1,2", 2, 1)  # missing bar
    with pytest.raises(ValueError):
        parse_weight("1|2", 2, 1)  # wrong arity


# ----- the pairing -----------------------------------------------------------------
def test_pairing_signature(d23):
    m, n = 2, 3
    for i in range(m):
        e = Weight.make([1 if k == i else 0 for k in range(m)], [0] * n)
        assert pairing(e, e) == 1
    for c in range(n):
        dl = Weight.make([0] * m, [1 if k == c else 0 for k in range(n)])
        assert pairing(dl, dl) == -1


def test_odd_roots_isotropic(d21, d23):
    for d in (d21, d23):
        for r in d.pos_odd:
            assert pairing(r.weight, r.weight) == 0


@settings(max_examples=30, deadline=None)
@given(weight_strategy(2, 3), weight_strategy(2, 3), small_rats)
def test_pairing_bilinear(u, v, c):
    w = u + v.scale(c)
    probe = Weight.make((1, -2), (3, 0, 1))
    assert pairing(w, probe) == pairing(u, probe) + c * pairing(v, probe)


def test_pairing_weyl_invariant(d23):
    u = parse_weight("1,-2|3,0,1", 2, 3)
    v = parse_weight("-1,4|1,1,-2", 2, 3)
    for w in d23.weyl_group():
        assert pairing(w.apply(u), w.apply(v)) == pairing(u, v)


# ----- heights ---------------------------------------------------------------------
def test_all_odd_roots_height_one_sl21(d21):
    assert all(d21.height(r.weight) == 1 for r in d21.pos_odd)


def test_heights_sl23(d23):
    by_text = {r.weight.text(): d23.height(r.weight) for r in d23.pos_odd}
    assert by_text["1,0|-1,0,0"] == 1  # eps1 - del1
    assert by_text["1,0|0,0,-1"] == 3  # eps1 - del3
    assert by_text["0,-1|1,0,0"] == 3  # del1 - eps2
    assert by_text["0,-1|0,0,1"] == 1  # del3 - eps2
    even = {r.weight.text(): d23.height(r.weight) for r in d23.pos_even}
    assert even["1,-1|0,0,0"] == 4  # eps1 - eps2 spans the whole u-order


@settings(max_examples=30, deadline=None)
@given(weight_strategy(2, 1), weight_strategy(2, 1))
def test_height_linear(u, v):
    d = build_root_datum(2, 1, 1, 1)
    assert d.height(u + v) == d.height(u) + d.height(v)


def test_root_sort_key_total_order(d23):
    roots = [r.weight for r in d23.pos_even + d23.pos_odd]
    keys = [d23.root_sort_key(r) for r in roots]
    assert len(set(keys)) == len(keys)
    ordered = sorted(roots, key=d23.root_sort_key)
    hts = [d23.height(r) for r in ordered]
    assert hts == sorted(hts)


# ----- Weyl group and dot action ----------------------------------------------------
def test_weyl_group_sizes(d21, d23):
    assert len(d21.weyl_group()) == 2
    assert len(d23.weyl_group()) == 12


def test_weyl_group_closed_under_composition(d23):
    group = d23.weyl_group()
    probe = parse_weight("1,-2|3,0,1", 2, 3)
    images = {w.apply(probe).coords() for w in group}
    for a in group:
        for b in group:
            assert a.compose(b).apply(probe).coords() in images


def test_dot_action_group_law(d21):
    lam = parse_weight("3,-1|2", 2, 1)
    for a in d21.weyl_group():
        for b in d21.weyl_group():
            lhs = dot_action(d21, a, dot_action(d21, b, lam, "full-rho"), "full-rho")
            rhs = dot_action(d21, a.compose(b), lam, "full-rho")
            assert lhs == rhs


# ----- atypicality and infinitesimal characters -------------------------------------
def test_atypicality_sets(d21, lam_typical, lam_atypical):
    assert atypicality_set(d21, lam_typical) == []
    atyp = atypicality_set(d21, lam_atypical)
    assert [r.weight.text() for r in atyp] == ["0,-1|1"]  # del1 - eps2
    zero = atypicality_set(d21, d21.zero())
    assert len(zero) == 2  # both odd roots


def test_atypical_shift_preserves_infinitesimal_character(d21, lam_atypical):
    alpha = atypicality_set(d21, lam_atypical)[0].weight
    assert same_infinitesimal_character(d21, lam_atypical, lam_atypical - alpha)


def test_typical_shift_changes_infinitesimal_character(d21, lam_typical):
    gamma = d21.pos_odd[0].weight
    assert not same_infinitesimal_character(d21, lam_typical, lam_typical - gamma)


def test_harish_chandra_condition(d21, lam_typical, lam_atypical):
    assert harish_chandra_condition(d21, lam_typical)
    # boundary case: (lam + rho0, eps1 - eps2) = 0 exactly
    assert not harish_chandra_condition(d21, lam_atypical)
    assert not harish_chandra_condition(d21, parse_weight("1,0|0", 2, 1))
