from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from cmzv.cyclotomic import CycloNumber, Index
from cmzv.numerics import EvalConfig, eval_symbolic
from cmzv.regularization import (
    SymbolicValue,
    shuffle_reg_const,
    shuffle_reg_decompose,
    shuffle_reg_poly,
    shuffle_reg_word,
    star_reg_const,
    stuffle_reg_const,
)
from cmzv.word_algebra import NCPoly, Word, X0, shuffle_word_pair, word_to_index


def W(letters, n=2):
    return Word(tuple(letters), n)


def test_decompose_spec_examples():
    # admissible word: c0 = the word itself
    w = W((1, X0))
    d = shuffle_reg_decompose(w)
    assert d.coefficients[0] == NCPoly.from_word(w)
    assert all(c.is_zero for c in d.coefficients[1:])
    # x1: c0 = 0, c1 = empty word
    d = shuffle_reg_decompose(W((0,)))
    assert d.coefficients[0].is_zero
    assert d.coefficients[1] == NCPoly.from_word(W(()))
    # x1 x1: c2 = empty word
    d = shuffle_reg_decompose(W((0, 0)))
    assert d.coefficients[0].is_zero and d.coefficients[1].is_zero
    assert d.coefficients[2] == NCPoly.from_word(W(()))


def test_decompose_rejects_h0_complement():
    with pytest.raises(ValueError):
        shuffle_reg_decompose(W((X0, 1)))
    with pytest.raises(ValueError):
        shuffle_reg_word(W((X0,)))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.data())
def test_decompose_reconstruction(n, data):
    length = data.draw(st.integers(1, 4))
    letters = [data.draw(st.integers(0, n - 1))]
    for _ in range(length - 1):
        letters.append(data.draw(st.sampled_from([X0] + list(range(n)))))
    w = Word(tuple(letters), n)
    d = shuffle_reg_decompose(w)
    assert d.reconstruct() == NCPoly.from_word(w)
    assert all(c.in_h0 for c in d.coefficients)


def test_reg_const_examples():
    # admissible: unchanged
    idx = Index.build((2,), (1,), 2)
    sv = shuffle_reg_const(idx)
    assert sv == SymbolicValue.from_atom(idx)
    # N=1, zeta(1) -> 0
    assert shuffle_reg_const(Index.build((1,), (0,), 1)).is_zero
    # N=2 divergent example: minus the atom of the word x1 x_{-1}
    got = shuffle_reg_const(Index.build((1, 1), (1, 0), 2))
    atom = word_to_index(W((0, 1)))
    assert got == SymbolicValue.from_atom(atom, Fraction(-1))


def test_reg_const_matches_decomposition_constant_term():
    for letters in [(1, 0), (1, 0, 0), (1, X0, 0), (0, 1, 0), (1, 1, 0, 0)]:
        w = W(letters)
        via_rewrite = shuffle_reg_word(w)
        c0 = shuffle_reg_decompose(w).constant_term
        from cmzv.regularization import _h0_poly_to_symbolic

        assert via_rewrite == _h0_poly_to_symbolic(c0)


def test_stuffle_reg_examples():
    # admissible untouched
    idx = Index.build((2,), (0,), 2)
    assert stuffle_reg_const(idx) == SymbolicValue.from_atom(idx)
    # zeta*(1) = 0 at T = 0
    assert stuffle_reg_const(Index.build((1,), (0,), 1)).is_zero
    # zeta*(-1,1;1,1) = -zeta(1,-1;1,1) - zeta(-1;2)
    got = stuffle_reg_const(Index.build((1, 1), (1, 0), 2))
    expect = (SymbolicValue.from_atom(Index.build((1, 1), (0, 1), 2), Fraction(-1))
              + SymbolicValue.from_atom(Index.build((2,), (1,), 2), Fraction(-1)))
    assert got == expect


def test_star_reg_depth1_equals_plain():
    idx = Index.build((2,), (1,), 3)
    assert star_reg_const(idx) == stuffle_reg_const(idx)


def test_all_outputs_admissible():
    for k, es, n in [((1, 1), (1, 0), 2), ((1, 1, 1), (2, 1, 0), 3), ((2, 1), (0, 0), 4)]:
        for sv in (shuffle_reg_const(Index.build(k, es, n)),
                   stuffle_reg_const(Index.build(k, es, n))):
            for (s, atoms), _ in sv.terms.items():
                assert all(a.is_admissible for a in atoms)


def test_regularization_formula_numeric():
    # Z(w x_eta x_1^l) = (-1)^l Z((w sh x_1^l) x_eta) for a couple of cases
    cfg = EvalConfig(precision=30)
    from cmzv.word_algebra import _shuffle_words

    cases = [((1,), 1, 1, 2), ((1,), X0, 2, 2), ((2, X0), 1, 1, 3), ((), 2, 2, 3)]
    with mp.workdps(45):
        for prefix, eta, l, n in cases:
            lhs_word = Word(tuple(prefix) + (eta,) + (0,) * l, n)
            lhs = eval_symbolic(shuffle_reg_word(lhs_word), cfg)
            rhs_poly = NCPoly.zero(n)
            for word, mult in _shuffle_words(tuple(prefix), (0,) * l):
                rhs_poly = rhs_poly + NCPoly(
                    n, {word + (eta,): CycloNumber.from_rational(mult, n)})
            rhs = eval_symbolic(shuffle_reg_poly(rhs_poly), cfg)
            sign = -1 if l % 2 else 1
            assert abs(lhs.value - sign * rhs.value) < mp.mpf(10) ** -25


def test_homomorphism_after_regularization():
    # reg(w1) * reg(w2) = reg(w1 sh w2) numerically, including divergent words
    cfg = EvalConfig(precision=30)
    pairs = [(W((1, 0)), W((1,))), (W((0,)), W((1, X0))), (W((1, 0)), W((0,)))]
    with mp.workdps(45):
        for u, v in pairs:
            vu = eval_symbolic(shuffle_reg_word(u), cfg)
            vv = eval_symbolic(shuffle_reg_word(v), cfg)
            vp = eval_symbolic(shuffle_reg_poly(shuffle_word_pair(u, v)), cfg)
            assert abs(vu.value * vv.value - vp.value) < mp.mpf(10) ** -25


def test_symbolic_value_algebra():
    n = 3
    a = SymbolicValue.from_atom(Index.build((2,), (1,), n))
    b = SymbolicValue.pi_power(n, 1)
    prod = a * b
    ((s, atoms), c), = prod.items()
    assert s == 1 and len(atoms) == 1
    assert prod.is_homogeneous and prod.weights() == {3}
    assert (a - a).is_zero
    assert SymbolicValue.one(n) * a == a
    with pytest.raises(ValueError):
        SymbolicValue.from_atom(Index.build((1,), (0,), n))
