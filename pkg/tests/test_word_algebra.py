from math import comb

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from cmzv.cyclotomic import CycloNumber, Index, ModulusMismatch
from cmzv.numerics import EvalConfig, eval_cmzv, eval_symbolic
from cmzv.regularization import SymbolicValue
from cmzv.word_algebra import (
    IndexCombination,
    NCPoly,
    Word,
    X0,
    index_to_word,
    reverse_conj,
    shuffle,
    shuffle_word_pair,
    star_expand,
    stuffle,
    word_to_index,
)


def W(letters, n=2):
    return Word(tuple(letters), n)


def test_word_predicates():
    assert W(()).in_h1 and W(()).in_h0
    assert W((1,)).in_h0
    assert not W((X0, 1)).in_h1
    assert W((1, 0)).in_h1 and not W((1, 0)).in_h0
    assert W((1, 0, 0)).trailing_ones == 2


def test_shuffle_examples():
    # x_a sh x_b = x_a x_b + x_b x_a
    r = shuffle_word_pair(W((1,), 3), W((2,), 3))
    assert r.terms == {(1, 2): CycloNumber.one(3), (2, 1): CycloNumber.one(3)}
    # x0 sh x1x0 = x0x1x0 + 2 x1x0x0
    r = shuffle_word_pair(W((X0,)), W((0, X0)))
    assert r.coeff(W((X0, 0, X0))) == CycloNumber.one(2)
    assert r.coeff(W((0, X0, X0))) == CycloNumber.from_rational(2, 2)
    # unit
    any_w = NCPoly.from_word(W((1, X0, 0)))
    assert shuffle(NCPoly.from_word(W(())), any_w) == any_w


_letters = st.lists(st.sampled_from([X0, 0, 1]), min_size=0, max_size=4)


@settings(max_examples=30, deadline=None)
@given(_letters, _letters, _letters)
def test_shuffle_commutative_associative(a, b, c):
    pa, pb, pc = (NCPoly.from_word(W(tuple(x))) for x in (a, b, c))
    assert shuffle(pa, pb) == shuffle(pb, pa)
    assert shuffle(shuffle(pa, pb), pc) == shuffle(pa, shuffle(pb, pc))


def test_shuffle_h0_closure_and_count():
    u, v = W((1, X0)), W((1, X0, X0))
    r = shuffle_word_pair(u, v)
    assert r.in_h0
    total = sum(sum(c.coeffs[0].numerator for c in [cc]) for cc in r.terms.values())
    assert total == comb(5, 2)
    # distinct-letter words: support size equals the binomial
    a, b = Word((1, X0), 3), Word((2, 2), 3)
    rr = shuffle_word_pair(a, b)
    assert sum(int(c.coeffs[0]) for c in rr.terms.values()) == comb(4, 2)


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        shuffle_word_pair(Word((1,), 2), Word((1,), 3))
    with pytest.raises(ModulusMismatch):
        stuffle(Index.build((1,), (1,), 2), Index.build((1,), (1,), 3))


def test_index_word_examples():
    idx = Index.build((1, 2), (1, 3), 6)
    assert index_to_word(idx) == Word((4, 3, X0), 6)
    assert index_to_word(Index.build((2,), (0,), 1)) == Word((0, X0), 1)
    assert index_to_word(Index.build((), (), 4)) == Word((), 4)
    assert word_to_index(Word((1, 1), 2)) == Index.build((1, 1), (0, 1), 2)
    assert word_to_index(Word((0, X0), 1)) == Index.build((2,), (0,), 1)
    with pytest.raises(ValueError):
        word_to_index(Word((X0, 1), 2))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.data())
def test_index_word_roundtrip(n, data):
    depth = data.draw(st.integers(0, 3))
    k = tuple(data.draw(st.integers(1, 3)) for _ in range(depth))
    es = tuple(data.draw(st.integers(0, n - 1)) for _ in range(depth))
    idx = Index.build(k, es, n)
    assert word_to_index(index_to_word(idx)) == idx


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.data())
def test_word_index_roundtrip(n, data):
    length = data.draw(st.integers(0, 4))
    letters = [data.draw(st.integers(0, n - 1))]
    for _ in range(length):
        letters.append(data.draw(st.sampled_from([X0] + list(range(n)))))
    w = Word(tuple(letters), n)
    assert index_to_word(word_to_index(w)) == w


def test_stuffle_examples():
    a, b = Index.build((1,), (1,), 6), Index.build((1,), (2,), 6)
    r = stuffle(a, b)
    keys = {idx.render() for idx in r.terms}
    assert keys == {"({1,1};{1,2})@6", "({1,1};{2,1})@6", "({2};{3})@6"}
    assert all(c == CycloNumber.one(6) for c in r.terms.values())
    # unit
    empty = Index.build((), (), 6)
    assert stuffle(empty, a) == IndexCombination.from_index(a)


def _rand_index(data, n, max_depth=2, max_k=2):
    depth = data.draw(st.integers(0, max_depth))
    k = tuple(data.draw(st.integers(1, max_k)) for _ in range(depth))
    es = tuple(data.draw(st.integers(0, n - 1)) for _ in range(depth))
    return Index.build(k, es, n)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.data())
def test_stuffle_commutative_associative(n, data):
    a = _rand_index(data, n)
    b = _rand_index(data, n)
    c = _rand_index(data, n, max_depth=1)
    assert stuffle(a, b) == stuffle(b, a)
    lhs = IndexCombination(n)
    for idx, coeff in stuffle(a, b).terms.items():
        lhs = lhs + stuffle(idx, c).scale(coeff)
    rhs = IndexCombination(n)
    for idx, coeff in stuffle(b, c).terms.items():
        rhs = rhs + stuffle(a, idx).scale(coeff)
    assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.data())
def test_stuffle_depth_counts(n, data):
    a = _rand_index(data, n, max_depth=2)
    b = _rand_index(data, n, max_depth=2)
    r = stuffle(a, b)
    d1, d2 = a.depth, b.depth
    top = sum(int(c.coeffs[0]) for idx, c in r.terms.items()
              if idx.depth == d1 + d2)
    assert top == comb(d1 + d2, d1)
    assert all(int(q) > 0 for c in r.terms.values() for q in c.coeffs[:1])


def test_star_expand():
    idx = Index.build((1, 2), (1, 3), 6)
    r = star_expand(idx)
    assert len(r.terms) == 2
    merged = Index.build((3,), (4,), 6)
    assert r.terms[merged] == CycloNumber.one(6)
    assert len(star_expand(Index.build((1,), (0,), 3)).terms) == 1
    r3 = star_expand(Index.build((1, 1, 1), (0, 1, 2), 3))
    assert sum(int(c.coeffs[0]) for c in r3.terms.values()) == 4
    # weight and root-product preserved
    for m in r3.terms:
        assert m.weight == 3
        assert m.xi_product().exponent == (0 + 1 + 2) % 3


def test_reverse_conj():
    idx = Index.build((1, 2), (1, 3), 6)
    rc = reverse_conj(idx)
    assert rc.k == (2, 1) and rc.xi_exponents() == (3, 5)
    assert reverse_conj(rc) == idx
    assert reverse_conj(Index.build((), (), 2)) == Index.build((), (), 2)


def test_numeric_shuffle_homomorphism_small():
    # eq-style check on a couple of nontrivial word pairs, N=2, prec 30
    cfg = EvalConfig(precision=30)
    from cmzv.regularization import shuffle_reg_poly, shuffle_reg_word

    pairs = [(W((1,)), W((1,))), (W((1,)), W((1, X0))), (W((1, X0)), W((0, X0)))]
    with mp.workdps(45):
        for u, v in pairs:
            vu = eval_symbolic(shuffle_reg_word(u), cfg)
            vv = eval_symbolic(shuffle_reg_word(v), cfg)
            vp = eval_symbolic(shuffle_reg_poly(shuffle_word_pair(u, v)), cfg)
            assert abs(vu.value * vv.value - vp.value) < mp.mpf(10) ** -25


def test_numeric_stuffle_compatibility_small():
    cfg = EvalConfig(precision=30)
    a = Index.build((1,), (1,), 2)
    b = Index.build((2,), (1,), 2)
    with mp.workdps(45):
        va = eval_cmzv(a, cfg).value
        vb = eval_cmzv(b, cfg).value
        sv = SymbolicValue.zero(2)
        for idx, c in stuffle(a, b).terms.items():
            sv = sv + SymbolicValue.from_atom(idx, c)
        vc = eval_symbolic(sv, cfg).value
        assert abs(va * vb - vc) < mp.mpf(10) ** -25
    # spec example: zeta(-1;2)^2 = 2 zeta(-1,1;2,2)... as a numeric identity
    with mp.workdps(45):
        va = eval_cmzv(b, cfg).value
        sv = SymbolicValue.zero(2)
        for idx, c in stuffle(b, b).terms.items():
            sv = sv + SymbolicValue.from_atom(idx, c)
        assert abs(va * va - eval_symbolic(sv, cfg).value) < mp.mpf(10) ** -25
