"""Theorem-level procedures: the even (g0) decomposition of simple modules,
Kostant cohomology of the nilpotent odd part with its comparison against Dirac
cohomology, and the two character formulas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import dirac, exactla, modules, oscillator
from .dirac import BlockCollection
from .exactla import SparseRationalMatrix
from .modules import TruncatedModule, VirtualCharacter
from .oscillator import OscMonomial
from .uea import Algebra
from .weights import RootDatum, Weight, atypicality_set, pairing


# ----- even decomposition ----------------------------------------------------------
@dataclass
class BranchingEntry:
    subset: tuple[int, ...]
    label: Weight
    included: bool
    exclusion_reason: str  # "atypicality" | "dirac-inequality" | "none"

    def to_json(self) -> dict:
        return {
            "subset": list(self.subset),
            "label": self.label.text(),
            "included": self.included,
            "exclusion_reason": self.exclusion_reason,
        }


@dataclass
class BranchingPrediction:
    entries: list[BranchingEntry]
    verified_input: bool  # whether the input was certified unitarizable

    def included_labels(self) -> list[Weight]:
        return [e.label for e in self.entries if e.included]

    def to_json(self) -> dict:
        return {
            "entries": [e.to_json() for e in self.entries],
            "verified_input": self.verified_input,
        }


def even_decomposition(
    datum: RootDatum, lam: Weight, height, certified: bool | None = None
) -> BranchingPrediction:
    """Predicted g0-constituents of L(lam): subsets S of the odd positive
    roots avoiding the atypicality set and (for nonempty S) satisfying the
    strict Dirac inequality for the label lam - Gamma_S."""
    if certified is None:
        certified = modules.certify_unitarity(datum, lam, height).certified
    atyp = {r.weight.coords() for r in atypicality_set(datum, lam)}
    entries: list[BranchingEntry] = []
    for size in range(datum.mn + 1):
        for subset in itertools.combinations(range(datum.mn), size):
            label = lam - modules.gamma_of_subset(datum, subset)
            if any(datum.pos_odd[k].weight.coords() in atyp for k in subset):
                entries.append(BranchingEntry(subset, label, False, "atypicality"))
                continue
            if subset and modules.dirac_scalar(datum, lam, label) <= 0:
                entries.append(
                    BranchingEntry(subset, label, False, "dirac-inequality")
                )
                continue
            entries.append(BranchingEntry(subset, label, True, "none"))
    return BranchingPrediction(entries, certified)


def even_decomposition_verify(
    datum: RootDatum, lam: Weight, height
) -> tuple[bool, Weight | None, BranchingPrediction]:
    """Character of L(lam) against the sum of even-simple characters over the
    included labels, compared up to the truncation height."""
    height = Fraction(height)
    prediction = even_decomposition(datum, lam, height)
    left = modules.character(modules.simple_truncation(datum, lam, height))
    total: dict[Weight, int] = {}
    for label in prediction.included_labels():
        offset = datum.height(lam - label)
        if offset > height:
            continue
        even = modules.even_simple_truncation(datum, label, height - offset)
        for nu in even.blocks:
            d = even.block_dim(nu)
            if d and datum.height(lam - nu) <= height:
                total[nu] = total.get(nu, 0) + d
    right = VirtualCharacter(total, height, lam)
    ok, diff = modules.characters_equal_to_height(datum, left, right, lam, height)
    return ok, diff, prediction


# ----- Kostant cohomology -------------------------------------------------------------
def cohomological_degree(datum: RootDatum, a: OscMonomial) -> int:
    pn = datum.p * datum.n
    return sum(a[:pn]) - sum(a[pn:])


@dataclass
class KostantReport:
    # per degree k: weight (reported with the +rho1 shift) -> multiplicity
    per_degree: dict[int, dict[Weight, int]]
    dd_zero: bool
    module: TruncatedModule
    height: Fraction

    def total_character_shifted_back(self) -> dict[Weight, int]:
        """Sum over degrees at the diagonal weight (the e^{-rho1}-twisted
        labels), for comparison with Dirac cohomology."""
        out: dict[Weight, int] = {}
        rho1 = self.module.datum.rho1
        for table in self.per_degree.values():
            for w, m in table.items():
                nu = w - rho1
                out[nu] = out.get(nu, 0) + m
        return {k: v for k, v in out.items() if v}

    def to_json(self) -> dict:
        datum = self.module.datum
        lam = self.module.highest_weight
        out = {"dd_zero": self.dd_zero, "degrees": {}}
        for k in sorted(self.per_degree):
            items = sorted(
                self.per_degree[k].items(),
                key=lambda kv: datum.root_sort_key(lam - kv[0]),
            )
            out["degrees"][str(k)] = [[w.text(), m] for w, m in items]
        return out


def kostant_cohomology(coll: BlockCollection) -> KostantReport:
    """H^k of the positive odd part with coefficients in the module, realized
    per diagonal block by d = d^{p1} - delta^{q2} on M (x) M(g1)."""
    module = coll.module
    datum = module.datum
    per_degree: dict[int, dict[Weight, int]] = {}
    dd_zero = True
    for nu in coll.sorted_weights():
        block = coll.blocks[nu]
        if block.dim == 0:
            continue
        d = block.d_p1.add(block.delta_q2.scale(-1))
        if not d.matmul(d).is_zero():
            dd_zero = False
        degs = [cohomological_degree(datum, a) for (_, _, a) in block.basis]
        deg_values = sorted(set(degs))
        idx_by_deg = {k: [i for i, dg in enumerate(degs) if dg == k] for k in deg_values}
        for k in deg_values:
            cols = idx_by_deg[k]
            rows_out = idx_by_deg.get(k + 1, [])
            rows_in = idx_by_deg.get(k - 1, [])
            # d restricted: C^k -> C^{k+1}
            dk = SparseRationalMatrix(len(rows_out), len(cols))
            for ri, r in enumerate(rows_out):
                for ci, c in enumerate(cols):
                    v = d.get(r, c)
                    if v:
                        dk.set(ri, ci, v)
            ker_dim = len(cols) - exactla.rank(dk)
            # image of d from C^{k-1}
            dprev = SparseRationalMatrix(len(cols), len(rows_in))
            for ri, r in enumerate(cols):
                for ci, c in enumerate(rows_in):
                    v = d.get(r, c)
                    if v:
                        dprev.set(ri, ci, v)
            im_dim = exactla.rank(dprev)
            h = ker_dim - im_dim
            if h:
                w = nu + datum.rho1
                per_degree.setdefault(k, {})
                per_degree[k][w] = per_degree[k].get(w, 0) + h
    return KostantReport(per_degree, dd_zero, module, coll.height)


def injection_check(
    coll: BlockCollection, cohom: dirac.CohomologyReport | None = None
) -> tuple[bool, Weight | None]:
    """Dirac cohomology character equals the total Kostant cohomology
    character twisted by e^{-rho1}, per diagonal weight."""
    module = coll.module
    datum = module.datum
    cohom = cohom or dirac.dirac_cohomology(coll)
    kost = kostant_cohomology(coll)
    if not kost.dd_zero:
        return False, None
    left = cohom.character().multiplicities
    right = kost.total_character_shifted_back()
    base = module.highest_weight - datum.rho1
    for nu in sorted(
        set(left) | set(right), key=lambda w: datum.root_sort_key(base - w)
    ):
        if left.get(nu, 0) != right.get(nu, 0):
            return False, nu
    return True, None


# ----- character formulas ----------------------------------------------------------------
def _odd_exterior_character(datum: RootDatum) -> dict[Weight, int]:
    """Character of the exterior algebra of the odd lowering part:
    product over odd positive roots of (1 + e^{-gamma})."""
    out: dict[Weight, int] = {datum.zero(): 1}
    for r in datum.pos_odd:
        nxt: dict[Weight, int] = {}
        for w, m in out.items():
            nxt[w] = nxt.get(w, 0) + m
            w2 = w - r.weight
            nxt[w2] = nxt.get(w2, 0) + m
        out = nxt
    return out


def _compact_character(
    datum: RootDatum, mu: Weight, height: Fraction
) -> dict[Weight, int]:
    mod = modules.compact_simple_truncation(datum, mu, max(height, Fraction(0)))
    return {nu: mod.block_dim(nu) for nu in mod.blocks if mod.block_dim(nu)}


def _n_mu_character(
    datum: RootDatum, mu: Weight, lam: Weight, height: Fraction
) -> dict[Weight, int]:
    """Character of (exterior algebra of n1^-) (x) F^mu, truncated to weights
    nu with ht(lam - nu) <= height."""
    ext = _odd_exterior_character(datum)
    rel_height = height - datum.height(lam - mu)
    fmu = _compact_character(datum, mu, rel_height + datum.mn)
    out: dict[Weight, int] = {}
    for w1, m1 in ext.items():
        for w2, m2 in fmu.items():
            w = w1 + w2
            if datum.height(lam - w) <= height:
                out[w] = out.get(w, 0) + m1 * m2
    return {k: v for k, v in out.items() if v}


def character_formula_check(
    coll: BlockCollection, which: str
) -> tuple[bool, Weight | None]:
    """Two character formulas for a module H given by its block collection.

    which="kostant": ch H = sum over degrees k and Kostant types F^mu of
    (-1)^k [H^k : F^mu] ch((ext n1^-) (x) F^mu).
    which="dirac-index": ch H = sum over compact types mu of H_D^+ of
    ch((ext n1^-) (x) F^{mu+rho1}) minus the same sum over H_D^-.
    """
    module = coll.module
    datum = module.datum
    lam = module.highest_weight
    height = coll.height
    left = modules.character(module).multiplicities
    right: dict[Weight, int] = {}
    if which == "kostant":
        kost = kostant_cohomology(coll)
        if not kost.dd_zero:
            return False, None
        for k, table in kost.per_degree.items():
            sign = -1 if k % 2 else 1
            for mu, m in table.items():
                for w, c in _n_mu_character(datum, mu, lam, height).items():
                    right[w] = right.get(w, 0) + sign * m * c
    elif which == "dirac-index":
        cohom = dirac.dirac_cohomology(coll)
        plus = dirac.hd_ktype_table(coll, cohom, +1)
        minus = dirac.hd_ktype_table(coll, cohom, -1)
        for table, sign in ((plus, 1), (minus, -1)):
            for nu, m in table.items():
                mu = nu + datum.rho1
                for w, c in _n_mu_character(datum, mu, lam, height).items():
                    right[w] = right.get(w, 0) + sign * m * c
    else:
        raise ValueError("which must be 'kostant' or 'dirac-index'")
    for nu in sorted(
        set(left) | set(right), key=lambda w: datum.root_sort_key(lam - w)
    ):
        if datum.height(lam - nu) > height:
            continue
        if left.get(nu, 0) != right.get(nu, 0):
            return False, nu
    return True, None


# ----- Vogan / Harish-Chandra consistency ---------------------------------------------------
def vogan_consistency(
    datum: RootDatum, lam: Weight, hd_highest_weights: Iterable[Weight]
) -> bool:
    """Every g0-highest weight w of the Dirac cohomology satisfies
    lam - rho1 = sigma(w + rho0) - rho0 for some Weyl element sigma."""
    target = lam - datum.rho1 + datum.rho0
    group = datum.weyl_group()
    for w in hd_highest_weights:
        shifted = w + datum.rho0
        if not any(sigma.apply(shifted) == target for sigma in group):
            return False
    return True


def harish_chandra_audit(coll: BlockCollection) -> bool:
    """Every g0-constituent found by the square audit has an actual highest
    weight satisfying the strict Harish-Chandra inequality."""
    from .weights import harish_chandra_condition

    report = dirac.dirac_square_audit(coll)
    return all(
        harish_chandra_condition(coll.module.datum, e.nu0) for e in report.entries
    )
