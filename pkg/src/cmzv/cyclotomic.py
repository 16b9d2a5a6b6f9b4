"""Exact arithmetic in the N-th cyclotomic field and index bookkeeping.

Elements of Q(zeta_N) are held in the power basis 1, zeta, ..., zeta^(phi(N)-1)
with exact rational coefficients, fully reduced modulo the N-th cyclotomic
polynomial.  Roots of unity are exponents mod N, never floating complex
numbers, so conjugation is negation of the exponent and powers are exact
integer arithmetic.  Every value carries its modulus N; arithmetic between
different moduli is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from mpmath import mp, mpc, mpf


class ModulusMismatch(ValueError):
    """Operands live in cyclotomic fields with different N."""


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer polynomials (num by den, den monic-leading)."""
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    quot = [0] * (max(len(num) - dd, 1))
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        assert c % lead == 0
        q = c // lead
        quot[i - dd] = q
        for j, dj in enumerate(den):
            num[i - dd + j] -= q * dj
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("modulus must be a positive integer")
    if n == 1:
        return (-1, 1)
    # divide x^n - 1 by the product of Phi_d over proper divisors d of n
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
            assert all(c == 0 for c in rem)
    return tuple(poly)


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_reduction_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row j = coefficients of zeta_N^j reduced mod Phi_N, for 0 <= j < max(n, 2*phi-1)."""
    phi_poly = cyclotomic_polynomial(n)
    deg = len(phi_poly) - 1
    size = max(n, 2 * deg - 1)
    rows: list[tuple[Fraction, ...]] = []
    cur = [Fraction(1)] + [Fraction(0)] * (deg - 1) if deg > 1 else [Fraction(1)]
    if deg == 1:
        # zeta is rational: x = root of Phi_n, i.e. 1 (n=1) or -1 (n=2)
        root = Fraction(-phi_poly[0], phi_poly[1])
        val = Fraction(1)
        for _ in range(size):
            rows.append((val,))
            val *= root
        return tuple(rows)
    for j in range(size):
        rows.append(tuple(cur))
        # multiply by x and reduce
        cur = [Fraction(0)] + cur
        if len(cur) > deg:
            top = cur.pop()
            if top:
                for i in range(deg):
                    cur[i] -= top * phi_poly[i]
    return tuple(rows)


@dataclass(frozen=True)
class RootOfUnity:
    """An N-th root of unity zeta_N^exponent, stored as an exponent mod N."""

    exponent: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be a positive integer")
        object.__setattr__(self, "exponent", self.exponent % self.modulus)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"N={self.modulus} vs N={other.modulus}")
        return RootOfUnity(self.exponent + other.exponent, self.modulus)

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity(-self.exponent, self.modulus)

    def __pow__(self, a: int) -> "RootOfUnity":
        return RootOfUnity(self.exponent * a, self.modulus)

    @property
    def is_one(self) -> bool:
        return self.exponent == 0

    def as_cyclo(self) -> "CycloNumber":
        return CycloNumber.zeta_power(self.modulus, self.exponent)

    def embed(self, precision: int) -> mpc:
        with mp.workdps(precision + 10):
            return mp.expjpi(mpf(2 * self.exponent) / self.modulus)

    def __str__(self) -> str:
        return f"z{self.modulus}^{self.exponent}"


@dataclass(frozen=True)
class CycloNumber:
    """Element of Q(zeta_N) in the power basis, canonically reduced mod Phi_N."""

    coeffs: tuple[Fraction, ...]
    modulus: int

    @staticmethod
    def zero(n: int) -> "CycloNumber":
        return CycloNumber((Fraction(0),) * euler_phi(n), n)

    @staticmethod
    def one(n: int) -> "CycloNumber":
        return CycloNumber.from_rational(1, n)

    @staticmethod
    def from_rational(q, n: int) -> "CycloNumber":
        c = [Fraction(0)] * euler_phi(n)
        c[0] = Fraction(q)
        return CycloNumber(tuple(c), n)

    @staticmethod
    def zeta_power(n: int, e: int) -> "CycloNumber":
        return CycloNumber(_power_reduction_table(n)[e % n], n)

    def __post_init__(self):
        if len(self.coeffs) != euler_phi(self.modulus):
            raise ValueError("coefficient vector has wrong length for modulus")

    def _check(self, other: "CycloNumber"):
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"N={self.modulus} vs N={other.modulus}")

    def __add__(self, other: "CycloNumber") -> "CycloNumber":
        self._check(other)
        return CycloNumber(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.modulus)

    def __sub__(self, other: "CycloNumber") -> "CycloNumber":
        self._check(other)
        return CycloNumber(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.modulus)

    def __neg__(self) -> "CycloNumber":
        return CycloNumber(tuple(-a for a in self.coeffs), self.modulus)

    def scale(self, q) -> "CycloNumber":
        q = Fraction(q)
        return CycloNumber(tuple(a * q for a in self.coeffs), self.modulus)

    def __mul__(self, other: "CycloNumber") -> "CycloNumber":
        self._check(other)
        deg = len(self.coeffs)
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    prod[i + j] += a * b
        table = _power_reduction_table(self.modulus)
        out = [Fraction(0)] * deg
        for j, c in enumerate(prod):
            if c:
                row = table[j]
                for i in range(deg):
                    if row[i]:
                        out[i] += c * row[i]
        return CycloNumber(tuple(out), self.modulus)

    def inverse(self) -> "CycloNumber":
        """Multiplicative inverse via the extended Euclidean algorithm mod Phi_N."""
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        phi_poly = [Fraction(c) for c in cyclotomic_polynomial(self.modulus)]
        a = list(self.coeffs)
        # extended gcd of a and Phi_N over Q[x]
        r0, r1 = phi_poly, [c for c in a]
        s0, s1 = [Fraction(0)], [Fraction(1)]

        def trim(p):
            while len(p) > 1 and not p[-1]:
                p.pop()
            return p

        r0, r1 = trim(r0), trim(r1)
        while r1 != [Fraction(0)]:
            # divide r0 by r1
            rem = list(r0)
            quo = [Fraction(0)] * max(len(rem) - len(r1) + 1, 1)
            for i in range(len(rem) - 1, len(r1) - 2, -1):
                if rem[i]:
                    q = rem[i] / r1[-1]
                    quo[i - (len(r1) - 1)] = q
                    for j, c in enumerate(r1):
                        rem[i - (len(r1) - 1) + j] -= q * c
            rem = trim(rem)
            # s update: s0 - quo*s1
            prod = [Fraction(0)] * (len(quo) + len(s1) - 1)
            for i, qc in enumerate(quo):
                if qc:
                    for j, sc in enumerate(s1):
                        prod[i + j] += qc * sc
            snew = [Fraction(0)] * max(len(s0), len(prod))
            for i, c in enumerate(s0):
                snew[i] += c
            for i, c in enumerate(prod):
                snew[i] -= c
            r0, r1 = r1, rem
            s0, s1 = s1, trim(snew)
        # r0 = gcd (a nonzero constant since Phi_N is irreducible), s0 * a = r0 mod Phi
        const = r0[0]
        inv = [c / const for c in s0]
        deg = len(self.coeffs)
        table = _power_reduction_table(self.modulus)
        out = [Fraction(0)] * deg
        for j, c in enumerate(inv):
            if c:
                row = table[j] if j < len(table) else None
                if row is None:
                    raise AssertionError("inverse degree exceeded reduction table")
                for i in range(deg):
                    out[i] += c * row[i]
        return CycloNumber(tuple(out), self.modulus)

    def conjugate(self) -> "CycloNumber":
        """Complex conjugation zeta -> zeta^(-1)."""
        n = self.modulus
        table = _power_reduction_table(n)
        deg = len(self.coeffs)
        out = [Fraction(0)] * deg
        for j, c in enumerate(self.coeffs):
            if c:
                row = table[(-j) % n]
                for i in range(deg):
                    out[i] += c * row[i]
        return CycloNumber(tuple(out), self.modulus)

    @property
    def is_zero(self) -> bool:
        return all(not c for c in self.coeffs)

    @property
    def is_rational(self) -> bool:
        return all(not c for c in self.coeffs[1:])

    def embed(self, precision: int) -> mpc:
        with mp.workdps(precision + 10):
            z = mp.expjpi(mpf(2) / self.modulus)
            acc = mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * z + mpc(mpf(c.numerator) / c.denominator)
            return acc

    def __str__(self) -> str:
        n = self.modulus
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                base = f"z{n}" if i == 1 else f"z{n}^{i}"
                if c == 1:
                    parts.append(base)
                elif c == -1:
                    parts.append(f"-{base}")
                else:
                    parts.append(f"{c}*{base}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" + {p}" if not p.startswith("-") else f" - {p[1:]}"
        return out


def cyclo_mul(a: CycloNumber, b: CycloNumber) -> CycloNumber:
    """Product in K_N (same-modulus check included)."""
    return a * b


def cyclo_embed(a: CycloNumber, precision: int) -> mpc:
    """Numeric embedding zeta_N -> exp(2 pi i / N) at the given precision."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    return a.embed(precision)


@dataclass(frozen=True)
class Index:
    """A pair of an exponent vector k and a root-of-unity vector xi."""

    k: tuple[int, ...]
    xi: tuple[RootOfUnity, ...]
    modulus: int

    def __post_init__(self):
        if len(self.k) != len(self.xi):
            raise ValueError("k and xi must have the same length")
        if any(ki < 1 for ki in self.k):
            raise ValueError("all k entries must be positive")
        if any(x.modulus != self.modulus for x in self.xi):
            raise ModulusMismatch("xi entries must share the index modulus")

    @staticmethod
    def build(k, xi_exponents, n: int) -> "Index":
        return Index(tuple(k), tuple(RootOfUnity(e, n) for e in xi_exponents), n)

    @property
    def depth(self) -> int:
        return len(self.k)

    @property
    def weight(self) -> int:
        return sum(self.k)

    @property
    def is_admissible(self) -> bool:
        if self.depth == 0:
            return True
        return not (self.k[-1] == 1 and self.xi[-1].is_one)

    def xi_exponents(self) -> tuple[int, ...]:
        return tuple(x.exponent for x in self.xi)

    def reverse_conj(self) -> "Index":
        """Reverse both vectors and conjugate every root."""
        return Index(self.k[::-1], tuple(x.conjugate() for x in self.xi[::-1]), self.modulus)

    def conjugate(self) -> "Index":
        """Conjugate every root, keeping the order."""
        return Index(self.k, tuple(x.conjugate() for x in self.xi), self.modulus)

    def xi_product(self) -> RootOfUnity:
        p = RootOfUnity(0, self.modulus)
        for x in self.xi:
            p = p * x
        return p

    def sort_key(self):
        return (self.weight, self.depth, self.k, self.xi_exponents())

    def render(self) -> str:
        ks = ",".join(str(x) for x in self.k)
        es = ",".join(str(e) for e in self.xi_exponents())
        return f"({{{ks}}};{{{es}}})@{self.modulus}"

    def __str__(self) -> str:
        return self.render()


def is_admissible(idx: Index) -> bool:
    return idx.is_admissible


def is_unit_mod(alpha: int, n: int) -> bool:
    return gcd(alpha % n, n) == 1


def enumerate_indices(n: int, weight: int, max_depth: int | None = None,
                      admissible_only: bool = False) -> list[Index]:
    """All indices of the exact weight (deterministic lexicographic order)."""
    out: list[Index] = []
    cap = weight if max_depth is None else min(max_depth, weight)

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    for depth in range(1, cap + 1):
        for k in compositions(weight, depth):
            for exps in _tuples(n, depth):
                idx = Index.build(k, exps, n)
                if admissible_only and not idx.is_admissible:
                    continue
                out.append(idx)
    out.sort(key=Index.sort_key)
    return out


def _tuples(n: int, length: int):
    if length == 0:
        yield ()
        return
    for head in range(n):
        for rest in _tuples(n, length - 1):
            yield (head,) + rest
