"""Shuffle and harmonic regularization of divergent words and indices.

The evaluation map on admissible words extends uniquely to all of h^1 once
the image of the single divergence letter x_1 is fixed to 0; concretely
h^1 = h^0[x_1] as a shuffle polynomial algebra, and the regularized value of
a word is the constant term of its decomposition.  The primary rewrite used
here sends w x_eta x_1^l to (-1)^l (w shuffle x_1^l) x_eta, which lands in
h^0 in a single step; the full decomposition is also available and the two
agree exactly on the constant term.

Harmonic regularization works the same way in the quasi-shuffle algebra on
index letters, peeling trailing (1; 1) entries.  The regularization constant
is fixed to T = 0 throughout, i.e. the regularized value of (1; 1) is 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .cyclotomic import CycloNumber, Index
from .word_algebra import (
    X0,
    IndexCombination,
    NCPoly,
    Word,
    _index_key,
    _key_index,
    _shuffle_words,
    _stuffle_keys,
    index_to_word,
    star_expand,
    word_to_index,
)


class SymbolicValue:
    """K_N-combination of terms (pi*i power, multiset of admissible index atoms).

    The empty multiset with power 0 is the unit; a depth-0 atom is identified
    with the unit.  Atom multisets are kept sorted for canonical hashing.
    """

    __slots__ = ("modulus", "terms")

    def __init__(self, modulus: int,
                 terms: dict[tuple[int, tuple[Index, ...]], CycloNumber] | None = None):
        self.modulus = modulus
        self.terms: dict[tuple[int, tuple[Index, ...]], CycloNumber] = {}
        if terms:
            for key, c in terms.items():
                if not c.is_zero:
                    self.terms[key] = c

    @staticmethod
    def zero(n: int) -> "SymbolicValue":
        return SymbolicValue(n)

    @staticmethod
    def one(n: int) -> "SymbolicValue":
        return SymbolicValue(n, {(0, ()): CycloNumber.one(n)})

    @staticmethod
    def pi_power(n: int, s: int, coeff=1) -> "SymbolicValue":
        c = coeff if isinstance(coeff, CycloNumber) else CycloNumber.from_rational(Fraction(coeff), n)
        return SymbolicValue(n, {(s, ()): c})

    @staticmethod
    def from_atom(idx: Index, coeff=1, pi_power: int = 0) -> "SymbolicValue":
        if not idx.is_admissible:
            raise ValueError(f"non-admissible atom {idx}")
        n = idx.modulus
        c = coeff if isinstance(coeff, CycloNumber) else CycloNumber.from_rational(Fraction(coeff), n)
        atoms = (idx,) if idx.depth > 0 else ()
        return SymbolicValue(n, {(pi_power, atoms): c})

    @staticmethod
    def from_atoms(n: int, atoms, coeff=1, pi_power: int = 0) -> "SymbolicValue":
        for a in atoms:
            if not a.is_admissible:
                raise ValueError(f"non-admissible atom {a}")
        c = coeff if isinstance(coeff, CycloNumber) else CycloNumber.from_rational(Fraction(coeff), n)
        key = (pi_power, tuple(sorted((a for a in atoms if a.depth > 0), key=Index.sort_key)))
        return SymbolicValue(n, {key: c})

    def __add__(self, other: "SymbolicValue") -> "SymbolicValue":
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key)
            out[key] = c if s is None else s + c
        return SymbolicValue(self.modulus, out)

    def __sub__(self, other: "SymbolicValue") -> "SymbolicValue":
        return self + other.scale_rational(-1)

    def scale(self, c: CycloNumber) -> "SymbolicValue":
        if c.is_zero:
            return SymbolicValue(self.modulus)
        return SymbolicValue(self.modulus, {k: v * c for k, v in self.terms.items()})

    def scale_rational(self, q) -> "SymbolicValue":
        q = Fraction(q)
        if not q:
            return SymbolicValue(self.modulus)
        return SymbolicValue(self.modulus, {k: v.scale(q) for k, v in self.terms.items()})

    def __mul__(self, other: "SymbolicValue") -> "SymbolicValue":
        out: dict[tuple[int, tuple[Index, ...]], CycloNumber] = {}
        for (s1, a1), c1 in self.terms.items():
            for (s2, a2), c2 in other.terms.items():
                key = (s1 + s2, tuple(sorted(a1 + a2, key=Index.sort_key)))
                c = c1 * c2
                prev = out.get(key)
                out[key] = c if prev is None else prev + c
        return SymbolicValue(self.modulus, out)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def term_weight(self, key) -> int:
        s, atoms = key
        return s + sum(a.weight for a in atoms)

    def weights(self) -> set[int]:
        return {self.term_weight(k) for k in self.terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def atoms(self) -> list[Index]:
        seen = set()
        out = []
        for _, atoms in self.terms:
            for a in atoms:
                if a not in seen:
                    seen.add(a)
                    out.append(a)
        out.sort(key=Index.sort_key)
        return out

    def items(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (kv[0][0], tuple(a.sort_key() for a in kv[0][1])))

    def __eq__(self, other) -> bool:
        return (isinstance(other, SymbolicValue) and self.modulus == other.modulus
                and self.terms == other.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (s, atoms), c in self.items():
            factors = []
            if s:
                factors.append("(pi*i)" if s == 1 else f"(pi*i)^{s}")
            factors.extend(f"zeta{a.render()}" for a in atoms)
            body = "*".join(factors) if factors else "1"
            bits.append(f"({c})*{body}")
        return " + ".join(bits)


@dataclass
class RegDecomposition:
    """Coefficients c_0..c_L with w = sum_l (x_1^(shuffle l) / l!) shuffle c_l."""

    word: Word
    coefficients: list[NCPoly]

    @property
    def constant_term(self) -> NCPoly:
        return self.coefficients[0]

    def reconstruct(self) -> NCPoly:
        from .word_algebra import shuffle

        n = self.word.modulus
        acc = NCPoly.zero(n)
        for l, c_l in enumerate(self.coefficients):
            if c_l.is_zero:
                continue
            # x_1^(shuffle l) / l! is the plain word x_1^l
            ones = NCPoly.from_word(Word((0,) * l, n))
            acc = acc + shuffle(ones, c_l)
        return acc


@lru_cache(maxsize=1 << 16)
def _decompose_letters(letters: tuple[int, ...]) -> tuple[tuple[int, tuple[tuple[tuple[int, ...], Fraction], ...]], ...]:
    """h^0[x_1] decomposition of a word, as {degree: {word: rational coeff}}."""
    t = 0
    for l in reversed(letters):
        if l != 0:
            break
        t += 1
    if t == 0:
        return ((0, ((letters, Fraction(1)),)),)
    v = letters[:-1]
    acc: dict[int, dict[tuple[int, ...], Fraction]] = {}

    def bump(deg: int, word: tuple[int, ...], coeff: Fraction):
        if not coeff:
            return
        row = acc.setdefault(deg, {})
        row[word] = row.get(word, Fraction(0)) + coeff
        if not row[word]:
            del row[word]

    # x_1 shuffle v = t * w + R, so w = (x_1 shuffle v - R) / t
    sh = _shuffle_words((0,), v)
    mult_w = next(c for word, c in sh if word == letters)
    assert mult_w == t, "trailing-run multiplicity mismatch in decomposition"
    for deg, row in _decompose_letters(v):
        for word, coeff in row:
            bump(deg + 1, word, coeff / t)
    for word, mult in sh:
        if word == letters:
            continue
        for deg, row in _decompose_letters(word):
            for w2, coeff in row:
                bump(deg, w2, -Fraction(mult) * coeff / t)
    return tuple(sorted((deg, tuple(sorted(row.items()))) for deg, row in acc.items() if row))


def shuffle_reg_decompose(w: Word) -> RegDecomposition:
    """Decompose an h^1 word over h^0[x_1] (exact, reconstruction verified by tests)."""
    if not w.in_h1:
        raise ValueError(f"word {w} is not in h^1 (starts with x_0)")
    n = w.modulus
    rows = dict(_decompose_letters(w.letters))
    top = max(rows) if rows else 0
    coeffs = []
    for l in range(top + 1):
        row = rows.get(l, ())
        poly = NCPoly(n, {word: CycloNumber.from_rational(c * factorial(l), n) for word, c in row})
        if not poly.in_h0:
            raise AssertionError("decomposition coefficient left h^0")
        coeffs.append(poly)
    return RegDecomposition(w, coeffs)


def _h0_poly_to_symbolic(p: NCPoly) -> SymbolicValue:
    out = SymbolicValue.zero(p.modulus)
    for letters, c in p.terms.items():
        idx = word_to_index(Word(letters, p.modulus))
        if idx.depth:
            out = out + SymbolicValue.from_atom(idx, c)
        else:
            out = out + SymbolicValue.one(p.modulus).scale(c)
    return out


def shuffle_reg_word(w: Word) -> SymbolicValue:
    """Regularized value of an h^1 word as admissible atoms (constant term).

    Divergent words are rewritten in one step: with w = u x_eta x_1^l where
    x_eta is the last letter not equal to x_1, the value equals
    (-1)^l times the value of (u shuffle x_1^l) x_eta, which is in h^0.
    """
    if not w.in_h1:
        raise ValueError(f"word {w} is not in h^1 (starts with x_0)")
    n = w.modulus
    if not w.letters:
        return SymbolicValue.one(n)
    l = w.trailing_ones
    if l == 0:
        return _h0_poly_to_symbolic(NCPoly.from_word(w))
    rest = w.letters[:-l]
    if not rest:
        return SymbolicValue.zero(n)  # pure power of x_1
    eta, prefix = rest[-1], rest[:-1]
    sign = -1 if l % 2 else 1
    out = SymbolicValue.zero(n)
    for word, mult in _shuffle_words(prefix, (0,) * l):
        idx = word_to_index(Word(word + (eta,), n))
        out = out + SymbolicValue.from_atom(idx, Fraction(sign * mult))
    return out


def shuffle_reg_poly(p: NCPoly) -> SymbolicValue:
    """Linear extension of ``shuffle_reg_word`` to h^1 polynomials."""
    out = SymbolicValue.zero(p.modulus)
    for letters, c in p.terms.items():
        out = out + shuffle_reg_word(Word(letters, p.modulus)).scale(c)
    return out


def shuffle_reg_const(idx: Index) -> SymbolicValue:
    """Shuffle-regularized value of an index as a combination of admissible atoms."""
    if idx.is_admissible:
        return SymbolicValue.from_atom(idx) if idx.depth else SymbolicValue.one(idx.modulus)
    return shuffle_reg_word(index_to_word(idx))


@lru_cache(maxsize=1 << 16)
def _stuffle_reg_key(key: tuple[tuple[int, int], ...], n: int) -> tuple[tuple[tuple[tuple[int, int], ...], Fraction], ...]:
    """Harmonic-regularized value (T = 0) as {admissible index key: rational coeff}."""
    if not key or key[-1] != (1, 0):
        return ((key, Fraction(1)),)
    a = key[:-1]
    # z_1 * a = t * (a z_1) + R with t the trailing z_1-run length of (a z_1)
    t = 1
    for z in reversed(a):
        if z != (1, 0):
            break
        t += 1
    acc: dict[tuple[tuple[int, int], ...], Fraction] = {}
    for word, mult in _stuffle_keys(((1, 0),), a, n):
        if word == key:
            continue
        for red, coeff in _stuffle_reg_key(word, n):
            c = acc.get(red, Fraction(0)) - Fraction(mult) * coeff / t
            if c:
                acc[red] = c
            elif red in acc:
                del acc[red]
    return tuple(sorted(acc.items()))


def stuffle_reg_const(idx: Index) -> SymbolicValue:
    """Harmonic-regularized value of an index with the T = 0 convention."""
    n = idx.modulus
    if idx.depth == 0:
        return SymbolicValue.one(n)
    out = SymbolicValue.zero(n)
    for key, coeff in _stuffle_reg_key(_index_key(idx), n):
        red = _key_index(key, n)
        if red.depth == 0:
            out = out + SymbolicValue.one(n).scale_rational(coeff)
        else:
            out = out + SymbolicValue.from_atom(red, coeff)
    return out


def stuffle_reg_combination(comb: IndexCombination) -> SymbolicValue:
    out = SymbolicValue.zero(comb.modulus)
    for idx, c in comb.terms.items():
        out = out + stuffle_reg_const(idx).scale(c)
    return out


def star_reg_const(idx: Index) -> SymbolicValue:
    """Harmonic-regularized star value: regularize each adjacent merge and sum."""
    return stuffle_reg_combination(star_expand(idx))
