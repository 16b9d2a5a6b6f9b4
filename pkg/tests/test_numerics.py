import pytest
from mpmath import mp, mpf

from cmzv.cyclotomic import CycloNumber, Index, RootOfUnity
from cmzv.numerics import (
    BigComplex,
    EvalConfig,
    NonAdmissibleIndex,
    PrecisionUnreachable,
    clear_caches,
    eval_cmzv,
    eval_symbolic,
    eval_weight1_closed,
    pi_i,
)
from cmzv.regularization import SymbolicValue

CFG = EvalConfig(precision=40)


def test_config_validation():
    with pytest.raises(ValueError):
        EvalConfig(precision=5)
    with pytest.raises(ValueError):
        EvalConfig(cutoff=50)
    with pytest.raises(ValueError):
        EvalConfig(accel_order=-1)


def test_depth_zero_is_exact_one():
    v = eval_cmzv(Index.build((), (), 3), CFG)
    assert v.re == 1 and v.im == 0 and v.err == 0


def test_non_admissible_rejected():
    with pytest.raises(NonAdmissibleIndex):
        eval_cmzv(Index.build((1,), (0,), 2), CFG)


def test_classical_values():
    with mp.workdps(60):
        cases = [
            (Index.build((2,), (0,), 1), mp.zeta(2)),
            (Index.build((3,), (0,), 1), mp.zeta(3)),
            (Index.build((1, 2), (0, 0), 1), mp.zeta(3)),          # Euler
            (Index.build((1, 1, 2), (0, 0, 0), 1), mp.zeta(4)),
            (Index.build((1,), (1,), 2), -mp.log(2)),
            (Index.build((1, 1), (0, 1), 2), mp.log(2) ** 2 / 2),
            (Index.build((1, 1), (1, 1), 2), (mp.log(2) ** 2 - mp.zeta(2)) / 2),
            (Index.build((2,), (1,), 4), mp.mpc(-mp.pi ** 2 / 48, mp.catalan)),
        ]
        for idx, expect in cases:
            v = eval_cmzv(idx, CFG)
            assert abs(v.value - expect) < mpf(10) ** -40
            assert abs(v.value - expect) <= v.err
            assert v.err <= mpf(10) ** -40


def test_depth1_against_polylog():
    # independent oracle: mpmath's polylog at roots of unity
    with mp.workdps(60):
        for n, e, k in [(3, 1, 2), (4, 3, 3), (5, 2, 2), (6, 1, 4)]:
            z = mp.expjpi(mpf(2 * e) / n)
            expect = mp.polylog(k, z)
            v = eval_cmzv(Index.build((k,), (e,), n), CFG)
            assert abs(v.value - expect) < mpf(10) ** -38


def test_weight1_closed_form():
    with mp.workdps(60):
        # -log 2
        v = eval_weight1_closed(RootOfUnity(1, 2), CFG)
        assert abs(v.value + mp.log(2)) < mpf(10) ** -45
        # N=6: purely imaginary, i pi/3
        v6 = eval_weight1_closed(RootOfUnity(1, 6), CFG)
        assert abs(v6.value - mp.mpc(0, mp.pi / 3)) < mpf(10) ** -45
        # N=4: -log(1-i) = -(1/2) log 2 + i pi/4
        v4 = eval_weight1_closed(RootOfUnity(1, 4), CFG)
        assert abs(v4.value - mp.mpc(-mp.log(2) / 2, mp.pi / 4)) < mpf(10) ** -45
        # series evaluation agrees with the closed form within combined err
        for n in (2, 3, 4, 5, 6):
            for e in range(1, n):
                s = eval_cmzv(Index.build((1,), (e,), n), CFG)
                c = eval_weight1_closed(RootOfUnity(e, n), CFG)
                assert abs(s.value - c.value) <= s.err + c.err
    with pytest.raises(ValueError):
        eval_weight1_closed(RootOfUnity(0, 5), CFG)


def test_pi_i():
    with mp.workdps(60):
        v = pi_i(CFG)
        assert v.re == 0
        assert abs(v.im - mp.pi) < mpf(10) ** -55
        # e^(pi i) + 1 = 0 cross-check
        assert abs(mp.exp(v.value) + 1) < mpf(10) ** -50
        sq = v * v
        assert abs(sq.value + mp.pi ** 2) < mpf(10) ** -50
        zero = v * BigComplex.exact(0)
        assert zero.magnitude() == 0


def test_conjugation_symmetry():
    with mp.workdps(60):
        for k, es, n in [((1, 2), (1, 2), 3), ((2, 1), (1, 3), 4), ((1, 1, 1), (1, 2, 2), 3)]:
            idx = Index.build(k, es, n)
            v = eval_cmzv(idx, CFG)
            vc = eval_cmzv(idx.conjugate(), CFG)
            assert abs(mp.conj(v.value) - vc.value) <= v.err + vc.err


def test_err_dominates_doubled_cutoff():
    # the reported error bound must dominate a 2M-term re-evaluation
    base = EvalConfig(precision=40, cutoff=2000)
    dbl = EvalConfig(precision=40, cutoff=4000)
    with mp.workdps(60):
        for k, es, n in [((2,), (0,), 1), ((1,), (1,), 6), ((1, 2), (1, 2), 3),
                         ((1, 1), (1, 1), 2)]:
            idx = Index.build(k, es, n)
            v1 = eval_cmzv(idx, base)
            v2 = eval_cmzv(idx, dbl)
            assert abs(v1.value - v2.value) <= v1.err + v2.err


def test_doubling_precision_consistency():
    with mp.workdps(80):
        for prec in (30, 40, 60):
            a = eval_cmzv(Index.build((1, 2), (1, 0), 3), EvalConfig(precision=prec))
            b = eval_cmzv(Index.build((1, 2), (1, 0), 3), EvalConfig(precision=prec + 10))
            assert abs(a.value - b.value) < mpf(10) ** -prec


def test_precision_unreachable_reported():
    cfg = EvalConfig(precision=40, cutoff=100, accel_order=0)
    with pytest.raises(PrecisionUnreachable):
        eval_cmzv(Index.build((2,), (1,), 6), cfg)


def test_eval_symbolic():
    with mp.workdps(60):
        n = 1
        assert eval_symbolic(SymbolicValue.zero(n), CFG).magnitude() == 0
        sv = SymbolicValue.from_atom(Index.build((2,), (0,), 1))
        assert abs(eval_symbolic(sv, CFG).value - eval_cmzv(Index.build((2,), (0,), 1), CFG).value) == 0
        # 6 zeta(2) + (pi i)^2 = 0
        comb = sv.scale_rational(6) + SymbolicValue.pi_power(1, 2)
        assert eval_symbolic(comb, CFG).magnitude() < mpf(10) ** -38
        # product term: zeta(2)^2 via multiset
        prod = SymbolicValue.from_atoms(1, (Index.build((2,), (0,), 1),
                                            Index.build((2,), (0,), 1)))
        assert abs(eval_symbolic(prod, CFG).value - mp.zeta(2) ** 2) < mpf(10) ** -38


def test_bigcomplex_error_propagation():
    a = BigComplex(mpf(2), mpf(0), mpf("1e-10"))
    b = BigComplex(mpf(3), mpf(4), mpf("1e-12"))
    s = a + b
    assert s.err == a.err + b.err
    p = a * b
    assert p.err >= abs(b.value) * a.err
    assert (-a).err == a.err and a.conjugate().err == a.err


def test_cache_roundtrip(tmp_path):
    from cmzv.cache import ValueCache
    from cmzv import numerics

    path = str(tmp_path / "cache.jsonl")
    cache = ValueCache(path)
    numerics.set_external_cache(cache)
    try:
        clear_caches()
        idx = Index.build((2,), (1,), 3)
        v1 = eval_cmzv(idx, CFG)
        clear_caches()
        cache2 = ValueCache(path)
        numerics.set_external_cache(cache2)
        v2 = eval_cmzv(idx, CFG)  # served from the re-read file
        assert abs(v1.value - v2.value) <= v1.err + v2.err
        stats = cache2.stats()
        assert stats["records"] >= 1
        # re-read values identical to written strings
        with open(path) as fh:
            line1 = fh.readline()
        cache3 = ValueCache(path)
        assert cache3.get((idx.render(), CFG.precision, CFG.cutoff, CFG.accel_order)) is not None
        with open(path) as fh:
            assert fh.readline() == line1
    finally:
        numerics.set_external_cache(None)
        clear_caches()
