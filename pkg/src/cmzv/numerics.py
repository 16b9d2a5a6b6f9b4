"""Arbitrary-precision evaluation of admissible CMZVs and symbolic expressions.

Strategy: the nested series is computed by dynamic programming over the
partial sums T_j(m) = sum_{m' < m} xi_j^{m'} m'^{-k_j} T_{j-1}(m') up to a
cutoff M, and the tail of every level is captured by an asymptotic expansion

    T_j(m) ~ sum over phases eta of eta^m * sum_{s,t} d_{s,t} m^{-s} log(m)^t

whose coefficients are solved order by order from the difference equation
T_j(m+1) - T_j(m) = xi_j^m m^{-k_j} T_{j-1}(m).  For the unit phase this
reproduces the Euler-Maclaurin correction; for a non-unit phase it is the
iterated Abel (summation by parts) transform.  The one free constant per
level (the limit) is fixed by matching against the DP value at m = M + 1.
Phases are exact roots of unity, so eta^m is computed from m mod N.

Error accounting is first order with a safety factor: the reported err
dominates the series-truncation envelope at the matching point plus the
accumulated roundoff of the DP loop.  No interval arithmetic is attempted;
the doubling tests in the suite validate the model empirically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import mp, mpc, mpf

from .cyclotomic import CycloNumber, Index, RootOfUnity
from .regularization import SymbolicValue


class EvalError(Exception):
    pass


class NonAdmissibleIndex(EvalError):
    """Direct evaluation requested for a divergent index."""


class PrecisionUnreachable(EvalError):
    """The requested precision cannot be certified with the given M and J."""


@dataclass(frozen=True)
class EvalConfig:
    precision: int = 40
    cutoff: int = 10000
    accel_order: int = 6

    def __post_init__(self):
        if self.precision < 10:
            raise ValueError("precision must be >= 10")
        if self.cutoff < 100:
            raise ValueError("cutoff M must be >= 100")
        if self.accel_order < 0:
            raise ValueError("accel_order J must be >= 0")

    @property
    def working_dps(self) -> int:
        return self.precision + 25

    def series_order(self, weight: int, modulus: int) -> int:
        """Smallest expansion order whose truncation beats the target.

        Tail coefficients grow like s! / q^s with q = 2*pi for the unit
        phase and q = |1 - eta| for a root phase eta, so the achievable
        digits at order S are about S*log10(M*q) - log10(S!).
        """
        import math

        needed = self.precision + 18 + 2 * weight
        if modulus == 1:
            q = 2 * math.pi
        else:
            q = min(abs(1 - complex(math.cos(2 * math.pi * e / modulus),
                                    math.sin(2 * math.pi * e / modulus)))
                    for e in range(1, modulus))
            q = min(q, 2 * math.pi)
        lm = math.log10(self.cutoff * q)
        if lm <= 0.3:
            raise ValueError("cutoff M too small for this modulus")
        s = 8
        while s < 300 and s * lm - math.lgamma(s + 1) / math.log(10) < needed:
            s += 1
        if s >= 300:
            raise PrecisionUnreachable(
                f"order cap reached for precision {self.precision} at M={self.cutoff}")
        return s + self.accel_order + weight


@dataclass
class BigComplex:
    """Complex value with a tracked absolute error bound."""

    re: mpf
    im: mpf
    err: mpf

    @staticmethod
    def from_mpc(z: mpc, err=0) -> "BigComplex":
        return BigComplex(mpf(z.real), mpf(z.imag), mpf(err))

    @staticmethod
    def exact(z) -> "BigComplex":
        z = mpc(z)
        return BigComplex(mpf(z.real), mpf(z.imag), mpf(0))

    @property
    def value(self) -> mpc:
        return mpc(self.re, self.im)

    def magnitude(self) -> mpf:
        return abs(self.value)

    def __add__(self, other: "BigComplex") -> "BigComplex":
        return BigComplex(self.re + other.re, self.im + other.im, self.err + other.err)

    def __sub__(self, other: "BigComplex") -> "BigComplex":
        return BigComplex(self.re - other.re, self.im - other.im, self.err + other.err)

    def __mul__(self, other: "BigComplex") -> "BigComplex":
        v = self.value * other.value
        err = (abs(self.value) * other.err + abs(other.value) * self.err
               + self.err * other.err)
        return BigComplex(mpf(v.real), mpf(v.imag), err)

    def __neg__(self) -> "BigComplex":
        return BigComplex(-self.re, -self.im, self.err)

    def conjugate(self) -> "BigComplex":
        return BigComplex(self.re, -self.im, self.err)

    def pow_int(self, k: int) -> "BigComplex":
        out = BigComplex.exact(1)
        for _ in range(k):
            out = out * self
        return out

    def distance(self, other: "BigComplex") -> mpf:
        return abs(self.value - other.value)

    def __str__(self) -> str:
        shown = -int(mp.floor(mp.log10(self.err))) - 1 if self.err > 0 else mp.dps
        shown = max(min(shown, mp.dps), 1)
        return f"({mp.nstr(self.re, shown)} {'+' if self.im >= 0 else '-'} {mp.nstr(abs(self.im), shown)}j) +- {mp.nstr(self.err, 2)}"


# ---------------------------------------------------------------------------
# log-Laurent series machinery (exact rational shift tables, numeric solves)
# ---------------------------------------------------------------------------

# a series is a dict {(s, t): mpc} for  sum d * n^(-s) * log(n)^t


@lru_cache(maxsize=None)
def _log_shift_coeffs(order: int) -> tuple[Fraction, ...]:
    # log(1 + 1/m) = sum_{i>=1} (-1)^(i+1) / (i m^i)
    return tuple(Fraction((-1) ** (i + 1), i) for i in range(1, order + 1))


@lru_cache(maxsize=None)
def _binom_series(s: int, order: int) -> tuple[Fraction, ...]:
    # (1 + 1/m)^(-s) = sum_{i>=0} binom(-s, i) m^(-i)
    out = [Fraction(1)]
    cur = Fraction(1)
    for i in range(1, order + 1):
        cur = cur * Fraction(-s - i + 1, i)
        out.append(cur)
    return tuple(out)


@lru_cache(maxsize=None)
def _shift_term(s: int, t: int, order: int) -> tuple[tuple[int, int, Fraction], ...]:
    """Expansion of (m+1)^(-s) log(m+1)^t over the basis m^(-s') log(m)^t'.

    Returned as (s_out, t_out, coeff) triples with s_out <= order.
    """
    lg = _log_shift_coeffs(order)
    # powers of L = log(1+1/m): L^p as dict {i: coeff} for m^(-i)
    lpow: list[dict[int, Fraction]] = [{0: Fraction(1)}]
    for _ in range(t):
        nxt: dict[int, Fraction] = {}
        for i, c in lpow[-1].items():
            for j, d in enumerate(lg, start=1):
                if i + j <= order:
                    nxt[i + j] = nxt.get(i + j, Fraction(0)) + c * d
        lpow.append(nxt)
    binom = _binom_series(s, order)
    out: dict[tuple[int, int], Fraction] = {}
    from math import comb

    for j in range(t + 1):
        cj = Fraction(comb(t, j))
        for i, cl in lpow[t - j].items():
            for b, cb in enumerate(binom):
                s_out = s + i + b
                if s_out > order:
                    break
                key = (s_out, j)
                out[key] = out.get(key, Fraction(0)) + cj * cl * cb
    return tuple((s_o, t_o, c) for (s_o, t_o), c in sorted(out.items()) if c)


def _series_add(a: dict, b: dict, scale=None):
    for key, c in b.items():
        v = c if scale is None else c * scale
        prev = a.get(key)
        a[key] = v if prev is None else prev + v


def _solve_unit_phase(g: dict, order: int, tmax: int) -> dict:
    """Solve D(m+1) - D(m) = g(m); free constant (0, 0) left at zero."""
    d: dict[tuple[int, int], mpc] = {}
    # residual bookkeeping: contributions of already-fixed D terms to each equation
    resid: dict[tuple[int, int], mpc] = {}

    def fix(key, val):
        if val == 0:
            return
        d[key] = d.get(key, mpc(0)) + val
        s, t = key
        for s_o, t_o, c in _shift_term(s, t, order):
            if (s_o, t_o) != (s, t):
                resid[(s_o, t_o)] = resid.get((s_o, t_o), mpc(0)) + val * mpf(c.numerator) / c.denominator

    for s_eq in range(1, order + 1):
        for t_eq in range(tmax, -1, -1):
            rhs = g.get((s_eq, t_eq), mpc(0)) - resid.get((s_eq, t_eq), mpc(0))
            if rhs == 0:
                continue
            if s_eq == 1:
                # only D_(0, t_eq+1) reaches this slot, with factor t_eq+1
                fix((0, t_eq + 1), rhs / (t_eq + 1))
            else:
                # leading contributor D_(s_eq-1, t_eq) with factor -(s_eq-1);
                # the slot also receives (t_eq+1) * D_(s_eq-1, t_eq+1), fixed earlier
                fix((s_eq - 1, t_eq), rhs / mpf(-(s_eq - 1)))
    return d


def _solve_root_phase(g: dict, eta: mpc, order: int) -> dict:
    """Solve eta * D(m+1) - D(m) = g(m) for a non-unit root of unity phase."""
    d: dict[tuple[int, int], mpc] = {}
    resid: dict[tuple[int, int], mpc] = {}
    denom = eta - 1

    def shifted_rest(key, val):
        # eta * (shift(D) - D) contributions of a fixed term
        s, t = key
        for s_o, t_o, c in _shift_term(s, t, order):
            if (s_o, t_o) != (s, t):
                resid[(s_o, t_o)] = resid.get((s_o, t_o), mpc(0)) + eta * val * mpf(c.numerator) / c.denominator

    tmax = max((t for (_, t) in g), default=0)
    for s_eq in range(0, order + 1):
        for t_eq in range(tmax, -1, -1):
            rhs = g.get((s_eq, t_eq), mpc(0)) - resid.get((s_eq, t_eq), mpc(0))
            if rhs == 0:
                continue
            val = rhs / denom
            d[(s_eq, t_eq)] = val
            shifted_rest((s_eq, t_eq), val)
    return d


def _eval_series(series: dict, m: int, logm: mpf) -> mpc:
    inv = mpf(1) / m
    acc = mpc(0)
    # Horner in 1/m per log power
    by_t: dict[int, dict[int, mpc]] = {}
    for (s, t), c in series.items():
        by_t.setdefault(t, {})[s] = c
    for t, row in by_t.items():
        smax = max(row)
        h = mpc(0)
        for s in range(smax, -1, -1):
            h = h * inv + row.get(s, mpc(0))
        acc += h * logm ** t if t else h
    return acc


def _series_envelope(series: dict, m: int, logm: mpf, order: int) -> mpf:
    """Magnitude of the last few retained orders at m: truncation envelope."""
    env = mpf(0)
    inv = mpf(1) / m
    for (s, t), c in series.items():
        if s >= order - 2:
            env += abs(c) * inv ** s * logm ** t
    return env


class _TailExpansion:
    """Asymptotic expansion of one level's partial-sum function."""

    __slots__ = ("modulus", "modes")

    def __init__(self, modulus: int):
        self.modulus = modulus
        self.modes: dict[int, dict] = {}

    def evaluate(self, m: int, roots: list[mpc], logm: mpf) -> mpc:
        acc = mpc(0)
        for e, series in self.modes.items():
            phase = roots[(e * m) % self.modulus]
            acc += phase * _eval_series(series, m, logm)
        return acc

    def envelope(self, m: int, logm: mpf, order: int) -> mpf:
        return sum((_series_envelope(s, m, logm, order) for s in self.modes.values()), mpf(0))


def _eval_admissible(idx: Index, cfg: EvalConfig) -> BigComplex:
    n = idx.modulus
    r = idx.depth
    if r == 0:
        return BigComplex(mpf(1), mpf(0), mpf(0))
    order = cfg.series_order(idx.weight, n)
    M = cfg.cutoff
    with mp.workdps(cfg.working_dps):
        roots = [mp.expjpi(mpf(2 * e) / n) for e in range(n)]
        logM1 = mp.log(M + 1)

        # DP partial sums T_j(m), m = 1..M+1; keep only current row values per level
        tvals = [mpc(1)] + [mpc(0)] * r  # T_0(m)=1, T_j accumulating
        # store T_j(M+1) by running the triangular recurrence
        exps = [x.exponent for x in idx.xi]
        ks = list(idx.k)
        maxabs = [mpf(0)] * (r + 1)
        for m in range(1, M + 1):
            inv = mpf(1) / m
            # update outer levels first so each uses T_{j-1}(m) (value before this step)
            for j in range(r, 0, -1):
                term = roots[(exps[j - 1] * m) % n] * inv ** ks[j - 1] * tvals[j - 1]
                tvals[j] += term
                a = abs(tvals[j])
                if a > maxabs[j]:
                    maxabs[j] = a
        # tvals[j] now equals T_j(M+1)

        # tail expansions level by level
        prev = _TailExpansion(n)
        prev.modes[0] = {(0, 0): mpc(1)}  # T_0 = 1
        trunc_err = mpf(0)
        tmax_cap = r + 1
        for j in range(1, r + 1):
            summand = _TailExpansion(n)
            kj, ej = ks[j - 1], exps[j - 1]
            for e, series in prev.modes.items():
                ne = (e + ej) % n
                target = summand.modes.setdefault(ne, {})
                _series_add(target, {(s + kj, t): c for (s, t), c in series.items() if s + kj <= order})
            cur = _TailExpansion(n)
            for e, g in summand.modes.items():
                if e == 0:
                    sol = _solve_unit_phase(g, order, tmax_cap)
                else:
                    sol = _solve_root_phase(g, roots[e], order)
                target = cur.modes.setdefault(e, {})
                _series_add(target, sol)
            # matching constant at m = M + 1
            c_match = tvals[j] - cur.evaluate(M + 1, roots, logM1)
            unit = cur.modes.setdefault(0, {})
            unit[(0, 0)] = unit.get((0, 0), mpc(0)) + c_match
            trunc_err += cur.envelope(M + 1, logM1, order)
            prev = cur

        final = prev.modes.get(0, {})
        value = final.get((0, 0), mpc(0))
        # convergent index: growing log terms must be numerically negligible
        grow = mpf(0)
        for (s, t), c in final.items():
            if s == 0 and t > 0:
                grow += abs(c) * logM1 ** t
        roundoff = mpf(10) ** (-cfg.working_dps) * (max(maxabs) + 1) * (r * M + 10) * 4
        err = (trunc_err + grow) * (order + 10) + roundoff
        err *= 10  # safety factor
        if err > mpf(10) ** (-cfg.precision):
            raise PrecisionUnreachable(
                f"certified error {mp.nstr(err, 3)} exceeds 1e-{cfg.precision} "
                f"for {idx.render()} (raise M or J)")
        return BigComplex(mpf(value.real), mpf(value.imag), err)


_atom_cache: dict[tuple[str, int, int, int], BigComplex] = {}
_external_cache = None


def set_external_cache(cache) -> None:
    """Install a persistent cache with get(key) / put(key, record) semantics."""
    global _external_cache
    _external_cache = cache


def clear_caches() -> None:
    _atom_cache.clear()


def eval_cmzv(idx: Index, cfg: EvalConfig | None = None) -> BigComplex:
    """Evaluate an admissible CMZV to the configured precision."""
    cfg = cfg or EvalConfig()
    if not idx.is_admissible:
        raise NonAdmissibleIndex(f"{idx.render()} has (k_r, xi_r) = (1, 1)")
    if idx.depth == 0:
        return BigComplex(mpf(1), mpf(0), mpf(0))
    key = (idx.render(), cfg.precision, cfg.cutoff, cfg.accel_order)
    hit = _atom_cache.get(key)
    if hit is not None:
        return hit
    if _external_cache is not None:
        rec = _external_cache.get(key)
        if rec is not None:
            _atom_cache[key] = rec
            return rec
    val = _eval_admissible(idx, cfg)
    _atom_cache[key] = val
    if _external_cache is not None:
        _external_cache.put(key, val)
    return val


def pi_i(cfg: EvalConfig | None = None) -> BigComplex:
    cfg = cfg or EvalConfig()
    with mp.workdps(cfg.working_dps):
        return BigComplex(mpf(0), +mp.pi, mpf(10) ** (-cfg.working_dps + 2))


def eval_weight1_closed(xi: RootOfUnity, cfg: EvalConfig | None = None) -> BigComplex:
    """Closed form -log(1 - xi) (principal branch) for xi != 1."""
    cfg = cfg or EvalConfig()
    if xi.is_one:
        raise ValueError("weight-1 closed form requires xi != 1")
    with mp.workdps(cfg.working_dps):
        z = -mp.log(1 - mp.expjpi(mpf(2 * xi.exponent) / xi.modulus))
        return BigComplex.from_mpc(z, mpf(10) ** (-cfg.working_dps + 2))


def embed_coeff(c: CycloNumber, cfg: EvalConfig) -> BigComplex:
    with mp.workdps(cfg.working_dps):
        return BigComplex.from_mpc(c.embed(cfg.working_dps), mpf(10) ** (-cfg.working_dps + 2))


def eval_symbolic(v: SymbolicValue, cfg: EvalConfig | None = None) -> BigComplex:
    """Evaluate a SymbolicValue: sum of coeff * (pi i)^s * product of atom values."""
    cfg = cfg or EvalConfig()
    with mp.workdps(cfg.working_dps):
        total = BigComplex(mpf(0), mpf(0), mpf(0))
        pii = pi_i(cfg)
        for (s, atoms), coeff in v.items():
            term = embed_coeff(coeff, cfg)
            if s:
                term = term * pii.pow_int(s)
            for a in atoms:
                term = term * eval_cmzv(a, cfg)
            total = total + term
        return total
