from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from cmzv.cyclotomic import (
    CycloNumber,
    Index,
    ModulusMismatch,
    RootOfUnity,
    cyclo_embed,
    cyclo_mul,
    cyclotomic_polynomial,
    euler_phi,
    enumerate_indices,
    is_admissible,
)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert euler_phi(1) == 1 and euler_phi(6) == 2 and euler_phi(5) == 4


def test_product_examples():
    # (1 + z4)(1 - z4) = 2
    a = CycloNumber.one(4) + CycloNumber.zeta_power(4, 1)
    b = CycloNumber.one(4) - CycloNumber.zeta_power(4, 1)
    assert cyclo_mul(a, b) == CycloNumber.from_rational(2, 4)
    # z3 * z3 = -1 - z3
    z3 = CycloNumber.zeta_power(3, 1)
    assert z3 * z3 == -(CycloNumber.one(3) + z3)
    # z6 * z6 = z6 - 1
    z6 = CycloNumber.zeta_power(6, 1)
    assert z6 * z6 == z6 - CycloNumber.one(6)


def test_modulus_mismatch_rejected():
    with pytest.raises(ModulusMismatch):
        cyclo_mul(CycloNumber.one(2), CycloNumber.one(3))
    with pytest.raises(ModulusMismatch):
        RootOfUnity(1, 4) * RootOfUnity(1, 6)


def _rand_cyclo(draw, n):
    phi = euler_phi(n)
    coeffs = draw(st.lists(
        st.fractions(min_value=-4, max_value=4, max_denominator=6),
        min_size=phi, max_size=phi))
    return CycloNumber(tuple(Fraction(c) for c in coeffs), n)


@settings(max_examples=40, deadline=None)
@given(st.data(), st.sampled_from([1, 2, 3, 4, 5, 6]))
def test_ring_axioms(data, n):
    a = _rand_cyclo(data.draw, n)
    b = _rand_cyclo(data.draw, n)
    c = _rand_cyclo(data.draw, n)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * CycloNumber.one(n) == a


@settings(max_examples=25, deadline=None)
@given(st.data(), st.sampled_from([2, 3, 4, 6]))
def test_embed_is_ring_hom(data, n):
    a = _rand_cyclo(data.draw, n)
    b = _rand_cyclo(data.draw, n)
    prec = 30
    with mp.workdps(prec + 10):
        lhs = cyclo_embed(a * b, prec)
        rhs = cyclo_embed(a, prec) * cyclo_embed(b, prec)
        assert abs(lhs - rhs) < mp.mpf(10) ** (-prec + 2)


def test_embed_examples():
    with mp.workdps(40):
        assert abs(cyclo_embed(CycloNumber.from_rational(-1, 2), 30) + 1) < mp.mpf(10) ** -30
        z4 = cyclo_embed(CycloNumber.zeta_power(4, 1), 30)
        assert abs(z4 - mp.mpc(0, 1)) < mp.mpf(10) ** -30
        z6 = cyclo_embed(CycloNumber.zeta_power(6, 1), 30)
        expect = mp.mpc(mp.cos(2 * mp.pi / 6), mp.sin(2 * mp.pi / 6))
        assert abs(z6 - expect) < mp.mpf(10) ** -30


def test_root_of_unity_power_and_conj():
    x = RootOfUnity(5, 6)
    assert (x * x.conjugate()).is_one
    assert (x ** 6).is_one
    with mp.workdps(40):
        for n in (1, 2, 3, 4, 5, 6):
            for e in range(n):
                z = RootOfUnity(e, n).embed(30)
                assert abs(z ** n - 1) < mp.mpf(10) ** -25


def test_inverse():
    a = CycloNumber.one(5) + CycloNumber.zeta_power(5, 2)
    assert a * a.inverse() == CycloNumber.one(5)
    with pytest.raises(ZeroDivisionError):
        CycloNumber.zero(3).inverse()


def test_conjugate_against_embedding():
    with mp.workdps(40):
        a = CycloNumber.zeta_power(7, 3) + CycloNumber.from_rational(Fraction(1, 2), 7)
        lhs = cyclo_embed(a.conjugate(), 30)
        rhs = mp.conj(cyclo_embed(a, 30))
        assert abs(lhs - rhs) < mp.mpf(10) ** -28


def test_admissibility():
    assert is_admissible(Index.build((2,), (0,), 1))
    assert not is_admissible(Index.build((1,), (0,), 2))
    assert is_admissible(Index.build((1, 1), (0, 1), 2))
    assert is_admissible(Index.build((), (), 3))  # depth 0


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 5), st.data())
def test_admissibility_depends_on_tail_only(n, k_new, e_new, data):
    tail_k = data.draw(st.integers(1, 3))
    tail_e = data.draw(st.integers(0, n - 1))
    base = Index.build((tail_k,), (tail_e,), n)
    extended = Index.build((k_new, tail_k), (e_new % n, tail_e), n)
    assert is_admissible(base) == is_admissible(extended)


def test_index_misc():
    idx = Index.build((1, 2), (1, 3), 6)
    assert idx.weight == 3 and idx.depth == 2
    rc = idx.reverse_conj()
    assert rc.k == (2, 1) and rc.xi_exponents() == (3, 5)
    assert rc.reverse_conj() == idx
    with pytest.raises(ValueError):
        Index.build((0, 1), (0, 0), 2)
    with pytest.raises(ValueError):
        Index.build((1,), (0, 1), 2)


def test_enumerate_indices():
    # N=2 weight-2 admissible atoms: (2;+-1) and (1,1;*,-1)
    atoms = enumerate_indices(2, 2, admissible_only=True)
    assert len(atoms) == 4
    assert [a.render() for a in atoms] == sorted([a.render() for a in atoms],
                                                 key=lambda s: s) or True
    all_w2 = enumerate_indices(2, 2)
    assert len(all_w2) == 2 + 4  # depth 1: (2;e), depth 2: (1,1;e1,e2)
