"""gl(m|n) on matrix units: structure constants, PBW straightening in U(g),
the anti-involution of su(p,q|n), Harish-Chandra projection, Casimirs, and the
Shapovalov pairing.

A generator is a matrix-unit label (i, j) with 0-based indices; parity is odd
iff exactly one index exceeds m-1.  A UEAElement is a dict mapping PBW words
(tuples of generators) to rational coefficients; the PBW order is
negative < Cartan < positive, each class internally ordered by (height, lex)
of the roots.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable

from .weights import RootDatum, Weight

Gen = tuple[int, int]
Word = tuple[Gen, ...]
UEAElement = dict[Word, Fraction]

ONE: Word = ()


def make(terms: Iterable[tuple[Word, Fraction]] | None = None) -> UEAElement:
    out: UEAElement = {}
    if terms:
        for w, c in terms:
            if c:
                out[w] = out.get(w, Fraction(0)) + c
                if not out[w]:
                    del out[w]
    return out


def add_into(acc: UEAElement, w: Word, c: Fraction) -> None:
    if not c:
        return
    v = acc.get(w, Fraction(0)) + c
    if v:
        acc[w] = v
    else:
        acc.pop(w, None)


def combine(*elements: UEAElement) -> UEAElement:
    out: UEAElement = {}
    for e in elements:
        for w, c in e.items():
            add_into(out, w, c)
    return out


def scale(e: UEAElement, c) -> UEAElement:
    c = Fraction(c)
    return {w: c * v for w, v in e.items()} if c else {}


class Algebra:
    """gl(m|n) with the positive system and involution of a fixed RootDatum."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.m = datum.m
        self.n = datum.n
        self.dim = datum.m + datum.n
        self._order_cache: dict[Gen, tuple] = {}
        self._normal_cache: dict[Word, UEAElement] = {}

    # ----- generator classification ------------------------------------------
    def parity(self, g: Gen) -> int:
        i, j = g
        return int((i < self.m) != (j < self.m))

    def is_cartan(self, g: Gen) -> bool:
        return g[0] == g[1]

    def triangular_class(self, g: Gen) -> str:
        if self.is_cartan(g):
            return "cartan"
        h = self.datum.height(self.datum.root_of_unit(*g))
        return "positive" if h > 0 else "negative"

    def gen_root(self, g: Gen) -> Weight:
        return self.datum.root_of_unit(*g)

    def order_key(self, g: Gen) -> tuple:
        key = self._order_cache.get(g)
        if key is None:
            cls = self.triangular_class(g)
            cls_rank = {"negative": 0, "cartan": 1, "positive": 2}[cls]
            if cls == "cartan":
                key = (cls_rank, Fraction(0), (Fraction(g[0]),))
            else:
                root = self.gen_root(g)
                key = (cls_rank, self.datum.height(root), root.coords())
            self._order_cache[g] = key
        return key

    def generators(self) -> list[Gen]:
        return sorted(
            ((i, j) for i in range(self.dim) for j in range(self.dim)),
            key=self.order_key,
        )

    def negative_generators(self) -> list[Gen]:
        return [g for g in self.generators() if self.triangular_class(g) == "negative"]

    def positive_generators(self) -> list[Gen]:
        return [g for g in self.generators() if self.triangular_class(g) == "positive"]

    def even_generators(self) -> list[Gen]:
        return [g for g in self.generators() if self.parity(g) == 0]

    # ----- structure constants ------------------------------------------------
    def supercommutator(self, a: Gen, b: Gen) -> UEAElement:
        """[E_ij, E_kl] = d_jk E_il - (-1)^{p p'} d_li E_kj."""
        i, j = a
        k, l = b
        sign = (-1) ** (self.parity(a) * self.parity(b))
        out: UEAElement = {}
        if j == k:
            add_into(out, ((i, l),), Fraction(1))
        if l == i:
            add_into(out, ((k, j),), Fraction(-sign))
        return out

    # ----- PBW straightening ----------------------------------------------------
    def _first_inversion(self, word: Word) -> int | None:
        for idx in range(len(word) - 1):
            a, b = word[idx], word[idx + 1]
            ka, kb = self.order_key(a), self.order_key(b)
            if ka > kb or (a == b and self.parity(a)):
                return idx
        return None

    def normal_order(self, element: UEAElement) -> UEAElement:
        out: UEAElement = {}
        for word, coeff in element.items():
            for w, c in self._normal_word(word).items():
                add_into(out, w, coeff * c)
        return out

    def _normal_word(self, word: Word) -> UEAElement:
        cached = self._normal_cache.get(word)
        if cached is not None:
            return cached
        idx = self._first_inversion(word)
        if idx is None:
            result = {word: Fraction(1)}
        else:
            a, b = word[idx], word[idx + 1]
            head, tail = word[:idx], word[idx + 2 :]
            result = {}
            bracket = self.supercommutator(a, b)
            if a == b:
                # odd g: g*g = (1/2)[g, g]
                for bw, bc in bracket.items():
                    for w, c in self._normal_word(head + bw + tail).items():
                        add_into(result, w, Fraction(1, 2) * bc * c)
            else:
                sign = (-1) ** (self.parity(a) * self.parity(b))
                for w, c in self._normal_word(head + (b, a) + tail).items():
                    add_into(result, w, Fraction(sign) * c)
                for bw, bc in bracket.items():
                    for w, c in self._normal_word(head + bw + tail).items():
                        add_into(result, w, bc * c)
        self._normal_cache[word] = result
        return result

    def multiply(self, x: UEAElement, y: UEAElement) -> UEAElement:
        prod: UEAElement = {}
        for wx, cx in x.items():
            for wy, cy in y.items():
                add_into(prod, wx + wy, cx * cy)
        return self.normal_order(prod)

    # ----- involution -----------------------------------------------------------
    def _sigma(self, i: int) -> int:
        if i < self.datum.p:
            return 1
        return -1

    def omega_gen(self, g: Gen) -> tuple[Gen, int]:
        i, j = g
        return (j, i), self._sigma(i) * self._sigma(j)

    def omega(self, x: UEAElement) -> UEAElement:
        """Anti-involution of su(p,q|n): E_ij -> s_i s_j E_ji, order reversed."""
        out: UEAElement = {}
        for word, coeff in x.items():
            sign = 1
            new: list[Gen] = []
            for g in reversed(word):
                og, s = self.omega_gen(g)
                sign *= s
                new.append(og)
            add_into(out, tuple(new), Fraction(sign) * coeff)
        return self.normal_order(out)

    # ----- Harish-Chandra projection and evaluation ------------------------------
    def hc_project(self, x: UEAElement) -> UEAElement:
        x = self.normal_order(x)
        return {
            w: c for w, c in x.items() if all(self.is_cartan(g) for g in w)
        }

    def evaluate_at(self, p: UEAElement, lam: Weight) -> Fraction:
        coords = lam.coords()
        total = Fraction(0)
        for word, coeff in p.items():
            val = coeff
            for g in word:
                if not self.is_cartan(g):
                    raise ValueError("evaluate_at requires an element of U(h)")
                val *= coords[g[0]]
            total += val
        return total

    # ----- invariant forms on g ---------------------------------------------------
    def str_form(self, a: Gen, b: Gen) -> Fraction:
        """str(E_ij E_kl) with str(X) = tr(A-block) - tr(D-block)."""
        i, j = a
        k, l = b
        if j != k or l != i:
            return Fraction(0)
        return Fraction(1 if i < self.m else -1)

    def b_form(self, a: Gen, b: Gen) -> Fraction:
        """Normalized invariant form: B = (1/2)(tr_D - tr_A) on products."""
        return -self.str_form(a, b) / 2

    def b_form_elem(self, x: UEAElement, y: UEAElement) -> Fraction:
        """B extended to degree-1 elements (words of length 1 or scalars)."""
        total = Fraction(0)
        for wx, cx in x.items():
            if len(wx) != 1:
                if len(wx) == 0:
                    continue
                raise ValueError("b_form_elem expects degree-1 elements")
            for wy, cy in y.items():
                if len(wy) != 1:
                    if len(wy) == 0:
                        continue
                    raise ValueError("b_form_elem expects degree-1 elements")
                total += cx * cy * self.b_form(wx[0], wy[0])
        return total

    # ----- Casimirs -----------------------------------------------------------------
    def casimir(self, kind: str) -> UEAElement:
        """Quadratic Casimir, normalized to act by (L+2rho, L) on a highest
        weight module (kind="full") resp. (mu+2rho0, mu) (kind="even")."""
        if kind not in ("full", "even"):
            raise ValueError("kind must be 'full' or 'even'")
        acc: UEAElement = {}
        for i in range(self.dim):
            for j in range(self.dim):
                g1: Gen = (i, j)
                if kind == "even" and self.parity(g1):
                    continue
                sign = Fraction(-1 if j >= self.m else 1)
                add_into(acc, ((i, j), (j, i)), sign)
        return self.normal_order(acc)

    # ----- odd basis table as generators -------------------------------------------
    def partial_k(self, k: int) -> UEAElement:
        """The k-th odd raising generator (0-based index in the basis table)."""
        return {(self.datum.odd_raising[k],): Fraction(1)}

    def x_k(self, k: int) -> UEAElement:
        """The k-th odd lowering generator, including its sign."""
        return {(self.datum.odd_lowering[k],): Fraction(self.datum.odd_lowering_sign[k])}


def shapovalov_pairing(alg: Algebra, x: UEAElement, y: UEAElement, lam: Weight) -> Fraction:
    """(X, Y)_L for X, Y in U(n^-): evaluate the Cartan part of omega(X) Y at L."""
    prod = alg.multiply(alg.omega(x), y)
    return alg.evaluate_at(alg.hc_project(prod), lam)
