"""Enveloping-algebra substrate: brackets, PBW normal ordering, the
anti-automorphism, Casimir elements, and the Shapovalov form."""

import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from superdirac import modules, uea
from superdirac.uea import Algebra
from superdirac.weights import Weight, build_root_datum, pairing, parse_weight


def gen_elem(g):
    return {(g,): Fraction(1)}


def elem_bracket(alg, x, px, y, py):
    """Super bracket of homogeneous elements of the given parities."""
    xy = alg.multiply(x, y)
    yx = alg.multiply(y, x)
    sign = -1 if (px and py) else 1
    return uea.combine(xy, uea.scale(yx, -sign))


def check_jacobi(alg, a, b, c):
    pa, pb, pc = alg.parity(a), alg.parity(b), alg.parity(c)
    ea, eb, ec = gen_elem(a), gen_elem(b), gen_elem(c)
    bc = elem_bracket(alg, eb, pb, ec, pc)
    ab = elem_bracket(alg, ea, pa, eb, pb)
    ac = elem_bracket(alg, ea, pa, ec, pc)
    lhs = elem_bracket(alg, ea, pa, bc, (pb + pc) % 2)
    rhs = uea.combine(
        elem_bracket(alg, ab, (pa + pb) % 2, ec, pc),
        uea.scale(elem_bracket(alg, eb, pb, ac, (pa + pc) % 2), -1 if (pa and pb) else 1),
    )
    diff = uea.combine(lhs, uea.scale(rhs, -1))
    assert not diff, (a, b, c, diff)


def test_super_jacobi_exhaustive_sl21(alg21):
    gens = alg21.generators()
    for a in gens:
        for b in gens:
            for c in gens:
                check_jacobi(alg21, a, b, c)


def test_super_jacobi_sampled_sl23(alg23):
    gens = alg23.generators()
    rng = random.Random(20230823)
    for _ in range(200):
        a, b, c = rng.choice(gens), rng.choice(gens), rng.choice(gens)
        check_jacobi(alg23, a, b, c)


def test_supercommutator_matches_multiplication(alg21):
    for a in alg21.generators():
        for b in alg21.generators():
            direct = alg21.normal_order(alg21.supercommutator(a, b))
            via_mult = elem_bracket(
                alg21, gen_elem(a), alg21.parity(a), gen_elem(b), alg21.parity(b)
            )
            assert direct == via_mult


def test_odd_generator_squares_to_zero(alg21):
    for g in alg21.generators():
        if alg21.parity(g) == 1:
            assert alg21.multiply(gen_elem(g), gen_elem(g)) == {}


def test_multiplication_associative(alg21):
    gens = alg21.generators()
    rng = random.Random(7)
    for _ in range(40):
        a, b, c = rng.choice(gens), rng.choice(gens), rng.choice(gens)
        ea, eb, ec = gen_elem(a), gen_elem(b), gen_elem(c)
        lhs = alg21.multiply(alg21.multiply(ea, eb), ec)
        rhs = alg21.multiply(ea, alg21.multiply(eb, ec))
        assert lhs == rhs


# ----- the anti-automorphism -------------------------------------------------------
def test_omega_specific_values(alg21):
    # E_{1,3} crosses the p|q split: sign -1; E_{2,3} stays inside: sign +1
    g, s = alg21.omega_gen((0, 2))
    assert (g, s) == ((2, 0), -1)
    g, s = alg21.omega_gen((1, 2))
    assert (g, s) == ((2, 1), 1)


def test_omega_is_an_involution(alg21, alg23):
    for alg in (alg21, alg23):
        for g in alg.generators():
            assert alg.omega(alg.omega(gen_elem(g))) == gen_elem(g)


def test_omega_reverses_products(alg21):
    gens = alg21.generators()
    rng = random.Random(11)
    for _ in range(60):
        a, b = rng.choice(gens), rng.choice(gens)
        lhs = alg21.omega(alg21.multiply(gen_elem(a), gen_elem(b)))
        rhs = alg21.multiply(alg21.omega(gen_elem(b)), alg21.omega(gen_elem(a)))
        assert lhs == rhs


def test_omega_fixes_cartan(alg21):
    for i in range(3):
        assert alg21.omega(gen_elem((i, i))) == gen_elem((i, i))


# ----- forms -----------------------------------------------------------------------
def test_str_form_supersymmetry(alg23):
    for a in alg23.generators():
        for b in alg23.generators():
            sign = -1 if (alg23.parity(a) and alg23.parity(b)) else 1
            assert alg23.str_form(a, b) == sign * alg23.str_form(b, a)


def test_b_form_on_odd_basis(alg21, alg23):
    # B(partial_k, x_l) = 1/2 delta_kl
    for alg in (alg21, alg23):
        mn = alg.datum.mn
        for k in range(mn):
            for l in range(mn):
                v = alg.b_form_elem(alg.partial_k(k), alg.x_k(l))
                assert v == (Fraction(1, 2) if k == l else 0)


def test_b_form_invariance(alg21):
    # B([a,b], c) = B(a, [b,c]) for the invariant even form
    gens = alg21.generators()
    rng = random.Random(13)
    for _ in range(60):
        a, b, c = rng.choice(gens), rng.choice(gens), rng.choice(gens)
        ab = elem_bracket(alg21, gen_elem(a), alg21.parity(a), gen_elem(b), alg21.parity(b))
        bc = elem_bracket(alg21, gen_elem(b), alg21.parity(b), gen_elem(c), alg21.parity(c))
        assert alg21.b_form_elem(ab, gen_elem(c)) == alg21.b_form_elem(gen_elem(a), bc)


# ----- Casimir scalars --------------------------------------------------------------
small = st.integers(-3, 3)


@settings(max_examples=15, deadline=None)
@given(small, small, small)
def test_full_casimir_scalar(l1, l2, c1):
    d = build_root_datum(2, 1, 1, 1)
    alg = Algebra(d)
    lam = Weight.make((l1, l2), (c1,))
    out = modules.act_elem(alg, lam, alg.casimir("full"), {(): Fraction(1)})
    got = out.get((), Fraction(0))
    assert got == pairing(lam + d.rho.scale(2), lam)


@settings(max_examples=15, deadline=None)
@given(small, small, small)
def test_even_casimir_scalar(l1, l2, c1):
    d = build_root_datum(2, 1, 1, 1)
    alg = Algebra(d)
    lam = Weight.make((l1, l2), (c1,))
    out = modules.act_elem(alg, lam, alg.casimir("even"), {(): Fraction(1)})
    got = out.get((), Fraction(0))
    assert got == pairing(lam + d.rho0.scale(2), lam)


# ----- Shapovalov form --------------------------------------------------------------
@settings(max_examples=15, deadline=None)
@given(small, small, small)
def test_height_one_gram_values_sl21(l1, l2, c1):
    d = build_root_datum(2, 1, 1, 1)
    lam = Weight.make((l1, l2), (c1,))
    mod = modules.verma_truncation(d, lam, 1)
    g1 = d.pos_odd[0].weight  # eps1 - del1
    g2 = d.pos_odd[1].weight  # del1 - eps2
    gram1 = modules.gram_block(mod, lam - g1).to_rows()
    gram2 = modules.gram_block(mod, lam - g2).to_rows()
    assert gram1 == [[Fraction(-(l1 + c1))]]
    assert gram2 == [[Fraction(l2 + c1)]]


@settings(max_examples=15, deadline=None)
@given(small, small, small)
def test_even_verma_gram_sl21(l1, l2, c1):
    d = build_root_datum(2, 1, 1, 1)
    lam = Weight.make((l1, l2), (c1,))
    mod = modules.even_verma_truncation(d, lam, 2)
    alpha = d.pos_even[0].weight  # eps1 - eps2
    gram = modules.gram_block(mod, lam - alpha).to_rows()
    assert gram == [[Fraction(l2 - l1)]]


def test_shapovalov_contravariance(alg21):
    d = alg21.datum
    lam = parse_weight("3,-1|2", 2, 1)
    lows = alg21.negative_generators()
    rng = random.Random(17)
    for _ in range(30):
        x = rng.choice(lows)
        u = gen_elem(rng.choice(lows))
        v = gen_elem(rng.choice(lows))
        lhs = uea.shapovalov_pairing(alg21, alg21.multiply(gen_elem(x), u), v, lam)
        rhs = uea.shapovalov_pairing(alg21, u, alg21.multiply(alg21.omega(gen_elem(x)), v), lam)
        assert lhs == rhs


def test_shapovalov_symmetric(alg21):
    lam = parse_weight("3,-1|2", 2, 1)
    lows = [gen_elem(g) for g in alg21.negative_generators()]
    for u in lows:
        for v in lows:
            assert uea.shapovalov_pairing(alg21, u, v, lam) == uea.shapovalov_pairing(
                alg21, v, u, lam
            )
