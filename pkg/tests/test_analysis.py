"""Theorem-level checks: branching, Kostant cohomology, character formulas,
and the consistency audits."""

import pytest

from superdirac import analysis, dirac, modules
from superdirac.weights import parse_weight


# ----- even decomposition ----------------------------------------------------------
def test_branching_constituent_counts(d21, lam_typical, lam_atypical):
    for lam, count in ((d21.zero(), 1), (lam_atypical, 2), (lam_typical, 4)):
        pred = analysis.even_decomposition(d21, lam, 2)
        assert len(pred.included_labels()) == count, lam.text()


def test_branching_exclusion_reasons(d21):
    lam = parse_weight("1,0|0", 2, 1)  # atypical along del1 - eps2
    pred = analysis.even_decomposition(d21, lam, 2, certified=False)
    reasons = {tuple(e.subset): e.exclusion_reason for e in pred.entries}
    assert reasons[()] == "none"
    # the weight is not unitarizable: the eps1 - del1 label fails the strict
    # inequality (s = -2)
    assert reasons[(0,)] == "dirac-inequality"
    assert reasons[(1,)] == "atypicality"
    assert reasons[(0, 1)] == "atypicality"


def test_branching_verify(d21, lam_typical, lam_atypical):
    for lam, count in ((d21.zero(), 1), (lam_atypical, 2), (lam_typical, 4)):
        ok, diff, pred = analysis.even_decomposition_verify(d21, lam, 3)
        assert ok, (lam.text(), diff)
        assert len(pred.included_labels()) == count


def test_branching_labels_typical(d21, lam_typical):
    pred = analysis.even_decomposition(d21, lam_typical, 2)
    g1 = d21.pos_odd[0].weight
    g2 = d21.pos_odd[1].weight
    labels = {w.coords() for w in pred.included_labels()}
    assert labels == {
        lam_typical.coords(),
        (lam_typical - g1).coords(),
        (lam_typical - g2).coords(),
        (lam_typical - g1 - g2).coords(),
    }


# ----- Kostant cohomology -----------------------------------------------------------
def test_cohomological_degree(d23):
    # first p*n exponents raise the degree, the rest lower it
    assert analysis.cohomological_degree(d23, (1, 0, 2, 0, 0, 0)) == 3
    assert analysis.cohomological_degree(d23, (0, 0, 0, 1, 1, 0)) == -2


def test_kostant_dd_zero_and_trivial_degree_zero(coll_trivial21, coll_typical3):
    for coll in (coll_trivial21, coll_typical3):
        report = analysis.kostant_cohomology(coll)
        assert report.dd_zero
    triv = analysis.kostant_cohomology(coll_trivial21)
    zero = triv.module.datum.zero()
    assert triv.per_degree[0].get(zero) == 1


def test_injection_identity(coll_typical3, coll_atypical2, coll_trivial21):
    for coll in (coll_typical3, coll_atypical2, coll_trivial21):
        ok, diff = analysis.injection_check(coll)
        assert ok, diff


# ----- character formulas -------------------------------------------------------------
def test_character_formulas_typical(coll_typical3):
    for which in ("kostant", "dirac-index"):
        ok, diff = analysis.character_formula_check(coll_typical3, which)
        assert ok, (which, diff)


def test_character_formulas_atypical(coll_atypical2):
    for which in ("kostant", "dirac-index"):
        ok, diff = analysis.character_formula_check(coll_atypical2, which)
        assert ok, (which, diff)


def test_character_formulas_trivial(coll_trivial21):
    for which in ("kostant", "dirac-index"):
        ok, diff = analysis.character_formula_check(coll_trivial21, which)
        assert ok, (which, diff)


def test_character_formula_rejects_unknown_variant(coll_typical3):
    with pytest.raises(ValueError):
        analysis.character_formula_check(coll_typical3, "euler")


# ----- consistency audits ---------------------------------------------------------------
def test_vogan_consistency(coll_typical3, rep_typical3, d21, lam_typical):
    hw = set()
    for sign in (+1, -1):
        table = dirac.hd_ktype_table(
            coll_typical3, rep_typical3, sign, raising_set="even"
        )
        hw.update(table)
    assert hw  # at least the top class
    assert analysis.vogan_consistency(d21, lam_typical, hw)


def test_vogan_consistency_detects_unlinked_weight(d21, lam_typical):
    bogus = lam_typical - d21.rho1 - parse_weight("1,0|0", 2, 1)
    assert not analysis.vogan_consistency(d21, lam_typical, [bogus])


def test_harish_chandra_audit(coll_typical3, coll_atypical2, coll_trivial21):
    assert analysis.harish_chandra_audit(coll_typical3)
    assert analysis.harish_chandra_audit(coll_atypical2)
    # the zero weight sits on the closed boundary of the strict condition
    assert not analysis.harish_chandra_audit(coll_trivial21)


# ----- documented limitation -------------------------------------------------------------
@pytest.mark.xfail(
    strict=True,
    reason=(
        "atypical certified weights acquire extra Dirac-kernel classes "
        "v (x) x^k along odd directions whose lowering operator kills the "
        "highest weight vector in the simple quotient, so the kernel strictly "
        "contains the shifted even simple module; the equality characterizes "
        "typical inputs (see the typical test in test_dirac.py)"
    ),
)
def test_atypical_cohomology_would_equal_even_simple(
    coll_atypical2, d21, lam_atypical
):
    from fractions import Fraction

    rep = dirac.dirac_cohomology(coll_atypical2)
    target = lam_atypical - d21.rho1
    l0 = modules.even_simple_truncation(d21, target, 2)
    ok, _ = modules.characters_equal_to_height(
        d21, rep.character(), modules.character(l0), target, Fraction(2)
    )
    assert ok and rep.hd_minus_total() == 0
