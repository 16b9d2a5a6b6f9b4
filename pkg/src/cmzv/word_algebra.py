"""Words over {x_0} + {x_xi}, shuffle and quasi-shuffle products, encodings.

A letter is stored as a small integer: -1 for x_0, otherwise the exponent
e in 0..N-1 for x_xi with xi = zeta_N^e.  In particular x_1 (the divergence
letter) is the letter 0; its special role is a predicate, not a type.

Two encodings of indices are used side by side:

* the integral-side word encoding (``index_to_word``/``word_to_index``),
  where the word of (k; xi) is x_{eta_1} x_0^{k_1-1} ... x_{eta_r} x_0^{k_r-1}
  with eta_j = xi_j xi_{j+1} ... xi_r, and conversely xi_j = eta_j *
  conj(eta_{j+1}) with eta_{r+1} = 1;

* the series-side letter encoding z_{k, xi} used by the quasi-shuffle
  (harmonic) product, which recurses on the outermost (rightmost) entries:
  (A z) * (B z') = ((A z) * B) z' + (A * (B z')) z + (A * B)(z . z') with
  z_{k,xi} . z_{k',xi'} = z_{k+k', xi*xi'}.  The outermost recursion matches
  the increasing-summation convention 0 < m_1 < ... < m_r.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import CycloNumber, Index, ModulusMismatch, RootOfUnity

X0 = -1  # letter tag for x_0


@dataclass(frozen=True)
class Word:
    """A word over the alphabet {x_0} + {x_xi}; empty tuple is the unit."""

    letters: tuple[int, ...]
    modulus: int

    def __post_init__(self):
        if any(l != X0 and not 0 <= l < self.modulus for l in self.letters):
            raise ValueError("letter exponent out of range")

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def weight(self) -> int:
        return len(self.letters)

    @property
    def in_h1(self) -> bool:
        return not self.letters or self.letters[0] != X0

    @property
    def in_h0(self) -> bool:
        return self.in_h1 and (not self.letters or self.letters[-1] != 0)

    @property
    def trailing_ones(self) -> int:
        t = 0
        for l in reversed(self.letters):
            if l != 0:
                break
            t += 1
        return t

    def sort_key(self):
        return (len(self.letters), self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "".join("x0" if l == X0 else f"x[{l}]" for l in self.letters)


class NCPoly:
    """K_N-linear combination of words (finite support, no zero coefficients)."""

    __slots__ = ("modulus", "terms")

    def __init__(self, modulus: int, terms: dict[tuple[int, ...], CycloNumber] | None = None):
        self.modulus = modulus
        self.terms: dict[tuple[int, ...], CycloNumber] = {}
        if terms:
            for w, c in terms.items():
                if not c.is_zero:
                    self.terms[w] = c

    @staticmethod
    def zero(n: int) -> "NCPoly":
        return NCPoly(n)

    @staticmethod
    def from_word(word: Word, coeff=1) -> "NCPoly":
        c = coeff if isinstance(coeff, CycloNumber) else CycloNumber.from_rational(Fraction(coeff), word.modulus)
        return NCPoly(word.modulus, {word.letters: c})

    def words(self) -> list[Word]:
        return sorted((Word(w, self.modulus) for w in self.terms), key=Word.sort_key)

    def coeff(self, word: Word) -> CycloNumber:
        return self.terms.get(word.letters, CycloNumber.zero(self.modulus))

    def _check(self, other: "NCPoly"):
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"N={self.modulus} vs N={other.modulus}")

    def __add__(self, other: "NCPoly") -> "NCPoly":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            out[w] = c if s is None else s + c
        return NCPoly(self.modulus, out)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + other.scale_rational(-1)

    def scale(self, c: CycloNumber) -> "NCPoly":
        if c.is_zero:
            return NCPoly(self.modulus)
        return NCPoly(self.modulus, {w: v * c for w, v in self.terms.items()})

    def scale_rational(self, q) -> "NCPoly":
        q = Fraction(q)
        if not q:
            return NCPoly(self.modulus)
        return NCPoly(self.modulus, {w: v.scale(q) for w, v in self.terms.items()})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def in_h0(self) -> bool:
        return all(Word(w, self.modulus).in_h0 for w in self.terms)

    @property
    def in_h1(self) -> bool:
        return all(Word(w, self.modulus).in_h1 for w in self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, NCPoly) and self.modulus == other.modulus and self.terms == other.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda t: (len(t), t)):
            bits.append(f"({self.terms[w]})*{Word(w, self.modulus)}")
        return " + ".join(bits)


@lru_cache(maxsize=1 << 18)
def _shuffle_words(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    acc: Counter = Counter()
    for w, c in _shuffle_words(u[1:], v):
        acc[(u[0],) + w] += c
    for w, c in _shuffle_words(u, v[1:]):
        acc[(v[0],) + w] += c
    return tuple(sorted(acc.items()))


def shuffle_word_pair(u: Word, v: Word) -> NCPoly:
    if u.modulus != v.modulus:
        raise ModulusMismatch(f"N={u.modulus} vs N={v.modulus}")
    n = u.modulus
    return NCPoly(n, {w: CycloNumber.from_rational(c, n)
                      for w, c in _shuffle_words(u.letters, v.letters)})


def shuffle(u: NCPoly, v: NCPoly) -> NCPoly:
    """Bilinear shuffle product on K_N<X>."""
    if u.modulus != v.modulus:
        raise ModulusMismatch(f"N={u.modulus} vs N={v.modulus}")
    n = u.modulus
    out: dict[tuple[int, ...], CycloNumber] = {}
    for wu, cu in u.terms.items():
        for wv, cv in v.terms.items():
            c = cu * cv
            for w, m in _shuffle_words(wu, wv):
                add = c.scale(m)
                s = out.get(w)
                out[w] = add if s is None else s + add
    return NCPoly(n, out)


def index_to_word(idx: Index) -> Word:
    """Integral-side word of an index: block j is x_{xi_j...xi_r} x_0^(k_j - 1)."""
    n = idx.modulus
    letters: list[int] = []
    suffix = 0  # exponent of xi_j * ... * xi_r, built from the right
    heads: list[int] = []
    for x in reversed(idx.xi):
        suffix = (suffix + x.exponent) % n
        heads.append(suffix)
    heads.reverse()
    for kj, hj in zip(idx.k, heads):
        letters.append(hj)
        letters.extend([X0] * (kj - 1))
    return Word(tuple(letters), n)


def word_to_index(w: Word) -> Index:
    """Inverse of ``index_to_word`` on h^1 words."""
    if not w.in_h1:
        raise ValueError(f"word {w} is not in h^1 (starts with x_0)")
    n = w.modulus
    heads: list[int] = []
    ks: list[int] = []
    for l in w.letters:
        if l == X0:
            ks[-1] += 1
        else:
            heads.append(l)
            ks.append(1)
    exps = []
    for j, h in enumerate(heads):
        nxt = heads[j + 1] if j + 1 < len(heads) else 0
        exps.append((h - nxt) % n)
    return Index.build(tuple(ks), tuple(exps), n)


class IndexCombination:
    """K_N-linear combination of indices (series-side encoding)."""

    __slots__ = ("modulus", "terms")

    def __init__(self, modulus: int, terms: dict[Index, CycloNumber] | None = None):
        self.modulus = modulus
        self.terms: dict[Index, CycloNumber] = {}
        if terms:
            for idx, c in terms.items():
                if not c.is_zero:
                    self.terms[idx] = c

    @staticmethod
    def from_index(idx: Index, coeff=1) -> "IndexCombination":
        c = coeff if isinstance(coeff, CycloNumber) else CycloNumber.from_rational(Fraction(coeff), idx.modulus)
        return IndexCombination(idx.modulus, {idx: c})

    def __add__(self, other: "IndexCombination") -> "IndexCombination":
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"N={self.modulus} vs N={other.modulus}")
        out = dict(self.terms)
        for idx, c in other.terms.items():
            s = out.get(idx)
            out[idx] = c if s is None else s + c
        return IndexCombination(self.modulus, out)

    def scale(self, c: CycloNumber) -> "IndexCombination":
        if c.is_zero:
            return IndexCombination(self.modulus)
        return IndexCombination(self.modulus, {i: v * c for i, v in self.terms.items()})

    def scale_rational(self, q) -> "IndexCombination":
        q = Fraction(q)
        if not q:
            return IndexCombination(self.modulus)
        return IndexCombination(self.modulus, {i: v.scale(q) for i, v in self.terms.items()})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __eq__(self, other) -> bool:
        return (isinstance(other, IndexCombination) and self.modulus == other.modulus
                and self.terms == other.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*zeta{idx.render()}" for idx, c in self.items())


def _index_key(idx: Index) -> tuple[tuple[int, int], ...]:
    return tuple(zip(idx.k, idx.xi_exponents()))


def _key_index(key: tuple[tuple[int, int], ...], n: int) -> Index:
    return Index.build(tuple(k for k, _ in key), tuple(e for _, e in key), n)


@lru_cache(maxsize=1 << 18)
def _stuffle_keys(a: tuple[tuple[int, int], ...], b: tuple[tuple[int, int], ...],
                  n: int) -> tuple[tuple[tuple[tuple[int, int], ...], int], ...]:
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    acc: Counter = Counter()
    za, zb = a[-1], b[-1]
    for w, c in _stuffle_keys(a, b[:-1], n):
        acc[w + (zb,)] += c
    for w, c in _stuffle_keys(a[:-1], b, n):
        acc[w + (za,)] += c
    merged = (za[0] + zb[0], (za[1] + zb[1]) % n)
    for w, c in _stuffle_keys(a[:-1], b[:-1], n):
        acc[w + (merged,)] += c
    return tuple(sorted(acc.items()))


def stuffle(a: Index, b: Index) -> IndexCombination:
    """Quasi-shuffle (harmonic) product of two indices."""
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"N={a.modulus} vs N={b.modulus}")
    n = a.modulus
    out: dict[Index, CycloNumber] = {}
    for key, c in _stuffle_keys(_index_key(a), _index_key(b), n):
        out[_key_index(key, n)] = CycloNumber.from_rational(c, n)
    return IndexCombination(n, out)


def stuffle_combinations(a: IndexCombination, b: IndexCombination) -> IndexCombination:
    """Bilinear extension of the quasi-shuffle product."""
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"N={a.modulus} vs N={b.modulus}")
    n = a.modulus
    out = IndexCombination(n)
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            out = out + stuffle(ia, ib).scale(ca * cb)
    return out


def star_expand(idx: Index) -> IndexCombination:
    """Star value as the sum over all adjacent-entry merges (all coefficients 1)."""
    n = idx.modulus
    r = idx.depth
    if r == 0:
        return IndexCombination.from_index(idx)
    out: dict[Index, CycloNumber] = {}
    one = CycloNumber.one(n)
    for mask in range(1 << (r - 1)):
        ks: list[int] = [idx.k[0]]
        es: list[int] = [idx.xi[0].exponent]
        for j in range(1, r):
            if mask & (1 << (j - 1)):
                ks[-1] += idx.k[j]
                es[-1] = (es[-1] + idx.xi[j].exponent) % n
            else:
                ks.append(idx.k[j])
                es.append(idx.xi[j].exponent)
        merged = Index.build(tuple(ks), tuple(es), n)
        prev = out.get(merged)
        out[merged] = one if prev is None else prev + one
    return IndexCombination(n, out)


def reverse_conj(idx: Index) -> Index:
    """Reverse the index and conjugate every root of unity."""
    return idx.reverse_conj()
