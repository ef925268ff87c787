"""Height-truncated highest-weight modules: Verma supermodules M(L), simple
quotients L(L), their even (g0) counterparts, characters, k-type tables, and
unitarity certification via Gram-matrix definiteness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import exactla, uea
from .exactla import SparseRationalMatrix
from .uea import Algebra, Gen, UEAElement, Word
from .weights import RootDatum, Weight, atypicality_set, pairing

ModuleVector = dict[Word, Fraction]


# ----- action of U(g) on a highest-weight module ---------------------------------
def act_word(alg: Algebra, lam: Weight, word: Word, vec: ModuleVector) -> ModuleVector:
    """Apply a product of generators (left to right) to a vector of M(lam)."""
    out: ModuleVector = {}
    for mono, coeff in vec.items():
        for w, c in alg._normal_word(word + mono).items():
            _accumulate_pbw(alg, lam, w, coeff * c, out)
    return out


def act_elem(alg: Algebra, lam: Weight, elem: UEAElement, vec: ModuleVector) -> ModuleVector:
    out: ModuleVector = {}
    for word, ec in elem.items():
        for mono, vc in act_word(alg, lam, word, vec).items():
            uea.add_into(out, mono, ec * vc)
    return out


def _accumulate_pbw(
    alg: Algebra, lam: Weight, word: Word, coeff: Fraction, out: ModuleVector
) -> None:
    """Project a PBW word applied to the highest weight vector."""
    if not coeff:
        return
    coords = lam.coords()
    neg_end = 0
    for g in word:
        if alg.triangular_class(g) == "negative":
            neg_end += 1
        else:
            break
    for g in word[neg_end:]:
        cls = alg.triangular_class(g)
        if cls == "positive":
            return  # kills the highest weight vector
        coeff *= coords[g[0]]
    uea.add_into(out, word[:neg_end], coeff)


def monomial_weight(alg: Algebra, lam: Weight, mono: Word) -> Weight:
    w = lam
    for g in mono:
        w = w + alg.gen_root(g)
    return w


def monomial_parity(alg: Algebra, mono: Word) -> int:
    return sum(alg.parity(g) for g in mono) % 2


# ----- block data -----------------------------------------------------------------
@dataclass
class Block:
    weight: Weight
    monomials: list[Word]
    parity: list[int]
    gram: SparseRationalMatrix
    radical: list[tuple[Fraction, ...]]
    qmap: exactla.QuotientMap | None = None
    gram_quot: SparseRationalMatrix | None = None

    @property
    def verma_dim(self) -> int:
        return len(self.monomials)

    @property
    def simple_dim(self) -> int:
        return len(self.monomials) - len(self.radical)

    def to_json(self) -> dict:
        return {
            "weight": self.weight.text(),
            "dim": self.verma_dim,
            "gram": [[str(x) for x in row] for row in self.gram.to_rows()],
            "radical_rank": len(self.radical),
            "parity": list(self.parity),
        }


@dataclass
class TruncatedModule:
    datum: RootDatum
    alg: Algebra
    highest_weight: Weight
    height: Fraction
    kind: str  # verma | simple | even-verma | even-simple
    blocks: dict[Weight, Block] = field(default_factory=dict)

    def block_dim(self, nu: Weight) -> int:
        b = self.blocks.get(nu)
        if b is None:
            return 0
        return b.verma_dim if self.kind.endswith("verma") else b.simple_dim

    def sorted_weights(self) -> list[Weight]:
        return sorted(
            self.blocks, key=lambda nu: self.datum.root_sort_key(self.highest_weight - nu)
        )

    def reduce(self, nu: Weight, vec_coords: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Coordinates of a Verma-block vector in the simple quotient."""
        b = self.blocks[nu]
        if self.kind.endswith("verma") or b.qmap is None:
            return tuple(vec_coords)
        return b.qmap.reduce_vector(vec_coords)


def _negative_generators(alg: Algebra, restriction: str) -> list[Gen]:
    gens = alg.negative_generators()
    if restriction == "even":
        gens = [g for g in gens if alg.parity(g) == 0]
    elif restriction == "compact":
        compact = {r.weight.coords() for r in alg.datum.pos_compact}
        gens = [
            g
            for g in gens
            if alg.parity(g) == 0 and (-alg.gen_root(g)).coords() in compact
        ]
    return gens


def _enumerate_monomials(
    alg: Algebra, gens: list[Gen], max_height: Fraction
) -> list[Word]:
    """All PBW monomials in the given lowering generators of height <= bound."""
    datum = alg.datum
    heights = [-datum.height(alg.gen_root(g)) for g in gens]
    out: list[Word] = []

    def rec(idx: int, remaining: Fraction, word: tuple[Gen, ...]) -> None:
        if idx == len(gens):
            out.append(word)
            return
        g = gens[idx]
        h = heights[idx]
        max_rep = 1 if alg.parity(g) else (int(remaining / h) if h > 0 else 0)
        reps = 0
        while True:
            rec(idx + 1, remaining - reps * h, word + (g,) * reps)
            reps += 1
            if reps > max_rep or reps * h > remaining:
                break

    rec(0, Fraction(max_height), ())
    return out


def _build(
    datum: RootDatum,
    lam: Weight,
    height: Fraction,
    kind: str,
    alg: Algebra | None = None,
) -> TruncatedModule:
    if not datum.admissible_highest_weight(lam):
        raise ValueError("inadmissible highest weight (central charge constraint)")
    alg = alg or Algebra(datum)
    if kind.startswith("even"):
        restriction = "even"
    elif kind.startswith("compact"):
        restriction = "compact"
    else:
        restriction = "all"
    gens = _negative_generators(alg, restriction)
    monomials = _enumerate_monomials(alg, gens, Fraction(height))
    by_weight: dict[Weight, list[Word]] = {}
    for mono in monomials:
        by_weight.setdefault(monomial_weight(alg, lam, mono), []).append(mono)
    mod = TruncatedModule(datum, alg, lam, Fraction(height), kind)
    simple = kind.endswith("simple")
    for nu in sorted(by_weight, key=lambda w: datum.root_sort_key(lam - w)):
        monos = sorted(by_weight[nu], key=lambda m: [alg.order_key(g) for g in m])
        dim = len(monos)
        gram = SparseRationalMatrix(dim, dim)
        for i in range(dim):
            xi = {monos[i]: Fraction(1)}
            for j in range(i, dim):
                v = uea.shapovalov_pairing(alg, xi, {monos[j]: Fraction(1)}, lam)
                if v:
                    gram.set(i, j, v)
                    if i != j:
                        gram.set(j, i, v)
        radical = exactla.kernel_basis(gram)
        block = Block(
            weight=nu,
            monomials=monos,
            parity=[monomial_parity(alg, m) for m in monos],
            gram=gram,
            radical=radical,
        )
        if simple:
            block.gram_quot, block.qmap = exactla.gram_on_quotient(gram, radical)
        mod.blocks[nu] = block
    return mod


def verma_truncation(datum: RootDatum, lam: Weight, height) -> TruncatedModule:
    return _build(datum, lam, Fraction(height), "verma")


def simple_truncation(datum: RootDatum, lam: Weight, height) -> TruncatedModule:
    return _build(datum, lam, Fraction(height), "simple")


def even_verma_truncation(datum: RootDatum, lam: Weight, height) -> TruncatedModule:
    return _build(datum, lam, Fraction(height), "even-verma")


def even_simple_truncation(datum: RootDatum, lam: Weight, height) -> TruncatedModule:
    return _build(datum, lam, Fraction(height), "even-simple")


def compact_simple_truncation(datum: RootDatum, lam: Weight, height) -> TruncatedModule:
    """Simple module over the compact subalgebra (gl(p) + gl(q) + gl(n))."""
    return _build(datum, lam, Fraction(height), "compact-simple")


def gram_block(module: TruncatedModule, nu: Weight) -> SparseRationalMatrix:
    b = module.blocks.get(nu)
    if b is None:
        raise KeyError(f"no stored block of weight {nu.text()}")
    return b.gram


# ----- characters ------------------------------------------------------------------
@dataclass
class VirtualCharacter:
    multiplicities: dict[Weight, int]
    height: Fraction
    base: Weight  # heights measured as ht(base - nu)

    def coeff(self, nu: Weight) -> int:
        return self.multiplicities.get(nu, 0)

    def to_json(self, datum: RootDatum) -> list[list]:
        items = sorted(
            self.multiplicities.items(),
            key=lambda kv: datum.root_sort_key(self.base - kv[0]),
        )
        return [[nu.text(), mult] for nu, mult in items if mult]


def character(module: TruncatedModule) -> VirtualCharacter:
    mult = {
        nu: module.block_dim(nu)
        for nu in module.blocks
        if module.block_dim(nu) > 0
    }
    return VirtualCharacter(mult, module.height, module.highest_weight)


def characters_equal_to_height(
    datum: RootDatum,
    a: VirtualCharacter,
    b: VirtualCharacter,
    base: Weight,
    height: Fraction,
) -> tuple[bool, Weight | None]:
    """Coefficient-wise comparison on weights nu with ht(base - nu) <= height."""
    support = set(a.multiplicities) | set(b.multiplicities)
    for nu in sorted(support, key=lambda w: datum.root_sort_key(base - w)):
        if datum.height(base - nu) > height:
            continue
        if a.coeff(nu) != b.coeff(nu):
            return False, nu
    return True, None


# ----- k-types ----------------------------------------------------------------------
@dataclass
class KTypeTable:
    multiplicities: dict[Weight, int]

    def to_json(self, datum: RootDatum, base: Weight) -> list[list]:
        items = sorted(
            self.multiplicities.items(),
            key=lambda kv: datum.root_sort_key(base - kv[0]),
        )
        return [[nu.text(), mult] for nu, mult in items if mult]


def _compact_raising_generators(alg: Algebra) -> list[Gen]:
    datum = alg.datum
    compact_roots = {r.weight.coords() for r in datum.pos_compact}
    return [
        g
        for g in alg.positive_generators()
        if alg.parity(g) == 0 and alg.gen_root(g).coords() in compact_roots
    ]


def ktype_table(module: TruncatedModule) -> KTypeTable:
    """Multiplicity of each compact-highest weight: vectors killed by all
    compact raising operators, counted blockwise on the stored module."""
    alg = module.alg
    lam = module.highest_weight
    raising = _compact_raising_generators(alg)
    table: dict[Weight, int] = {}
    for nu in module.sorted_weights():
        b = module.blocks[nu]
        dim_here = module.block_dim(nu)
        if dim_here == 0:
            continue
        if not raising:
            table[nu] = dim_here
            continue
        rows: list[list[Fraction]] = []
        simple = module.kind.endswith("simple")
        # columns: basis of the block (quotient coordinates for simples)
        cols: list[ModuleVector] = []
        if simple and b.qmap is not None:
            kept = [b.monomials[i] for i in b.qmap.kept]
            cols = [{m: Fraction(1)} for m in kept]
        else:
            cols = [{m: Fraction(1)} for m in b.monomials]
        stacked: list[list[Fraction]] = []
        for g in raising:
            target = nu + alg.gen_root(g)
            tb = module.blocks.get(target)
            images = [act_word(alg, lam, (g,), v) for v in cols]
            if tb is None:
                # raising lands above the highest weight: image must be zero
                tdim = 0
                coords = [[] for _ in images]
            else:
                tmonos = tb.monomials
                index = {m: i for i, m in enumerate(tmonos)}
                coords = []
                for img in images:
                    vec = [Fraction(0)] * len(tmonos)
                    for m, c in img.items():
                        vec[index[m]] += c
                    red = module.reduce(target, vec)
                    coords.append(list(red))
                tdim = len(coords[0]) if coords else 0
            for r in range(tdim):
                stacked.append([coords[c][r] for c in range(len(cols))])
        if not stacked:
            table[nu] = len(cols)
            continue
        a = SparseRationalMatrix.from_rows(stacked) if stacked else None
        kdim = len(exactla.kernel_basis(a)) if a is not None else len(cols)
        if kdim:
            table[nu] = kdim
    return KTypeTable(table)


# ----- filtration character identity -------------------------------------------------
def gamma_of_subset(datum: RootDatum, subset: Iterable[int]) -> Weight:
    total = datum.zero()
    for k in subset:
        total = total + datum.pos_odd[k].weight
    return total


def verma_filtration_check(
    datum: RootDatum, lam: Weight, height
) -> tuple[bool, Weight | None]:
    """ch M(lam) = sum over subsets S of the odd positive roots of
    ch M0(lam - Gamma_S), compared to the given height."""
    height = Fraction(height)
    alg = Algebra(datum)
    left = character(_build(datum, lam, height, "verma", alg))
    total: dict[Weight, int] = {}
    for size in range(datum.mn + 1):
        for subset in itertools.combinations(range(datum.mn), size):
            hw = lam - gamma_of_subset(datum, subset)
            offset = datum.height(lam - hw)
            if offset > height:
                continue
            even = _build(datum, hw, height - offset, "even-verma", alg)
            for nu in even.blocks:
                if datum.height(lam - nu) > height:
                    continue
                total[nu] = total.get(nu, 0) + even.block_dim(nu)
    right = VirtualCharacter(total, height, lam)
    return characters_equal_to_height(datum, left, right, lam, height)


# ----- unitarity certification --------------------------------------------------------
@dataclass
class UnitarityCertificate:
    verdict: str  # "certified-up-to-N" | "refuted-at"
    height: Fraction
    refuted_block: Weight | None
    witness: tuple[Fraction, ...] | None
    audit: list[tuple[Weight, Fraction]]  # (label mu, s) with s >= 0

    @property
    def certified(self) -> bool:
        return self.verdict == "certified-up-to-N"

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "height": str(self.height),
            "audit": [[mu.text(), str(s)] for mu, s in self.audit],
        }
        if self.refuted_block is not None:
            out["refuted_block"] = self.refuted_block.text()
        if self.witness is not None:
            out["witness"] = [str(x) for x in self.witness]
        return out


def dirac_scalar(datum: RootDatum, lam: Weight, mu: Weight) -> Fraction:
    """s = (mu + 2 rho, mu) - (lam + 2 rho, lam)."""
    return pairing(mu + datum.rho.scale(2), mu) - pairing(lam + datum.rho.scale(2), lam)


def constituent_labels(datum: RootDatum, lam: Weight) -> list[tuple[frozenset, Weight]]:
    """Subset labels lam - Gamma_S over S disjoint from the atypicality set."""
    atyp = {r.weight.coords() for r in atypicality_set(datum, lam)}
    out = []
    for size in range(datum.mn + 1):
        for subset in itertools.combinations(range(datum.mn), size):
            if any(datum.pos_odd[k].weight.coords() in atyp for k in subset):
                continue
            out.append((frozenset(subset), lam - gamma_of_subset(datum, subset)))
    return out


def certify_unitarity(
    datum: RootDatum, lam: Weight, height, module: TruncatedModule | None = None
) -> UnitarityCertificate:
    height = Fraction(height)
    module = module or simple_truncation(datum, lam, height)
    audit = [
        (mu, dirac_scalar(datum, lam, mu))
        for _, mu in constituent_labels(datum, lam)
    ]
    audit = [(mu, s) for mu, s in audit if s >= 0]
    audit.sort(key=lambda t: datum.root_sort_key(lam - t[0]))
    for nu in module.sorted_weights():
        b = module.blocks[nu]
        if b.gram_quot is None or b.gram_quot.rows == 0:
            continue
        cert = exactla.definiteness(b.gram_quot)
        if cert.verdict != "positive-definite":
            # lift witness (or a deficient direction) back to block coordinates
            witness = cert.witness
            return UnitarityCertificate("refuted-at", height, nu, witness, audit)
    return UnitarityCertificate("certified-up-to-N", height, None, None, audit)
