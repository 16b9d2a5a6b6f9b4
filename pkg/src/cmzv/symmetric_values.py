"""Symmetric value expansions, parity/antipode combinations, PD generators.

The shuffle-regularized symmetric expansion of an index (k_1..k_r; xi_1..xi_r)
at twist alpha is

    sum_{j=0}^r (xi_{j+1} ... xi_r)^alpha * (-1)^(k_{j+1}+...+k_r)
        * reg(front_j) * reg(reverse-conjugate of back_j)

with front_j = (k_1..k_j; xi_1..xi_j) and back_j = (k_{j+1}..k_r; ...).  The
star variant replaces shuffle regularization by harmonic regularization and
the reversed factor by its star version; the exact formula adopted here
(the reversed-conjugated back factor as a harmonic-regularized star value)
is stated in this docstring because it is what the antipode identity below
pairs with.

The antipode combination sum_{j} (-1)^(r-j) reg*(front_j) *
reg*star(reversed back_j, no conjugation) vanishes identically, which the
suite checks both numerically and as an exact collapse under the
quasi-shuffle product.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclotomic import CycloNumber, Index, RootOfUnity, enumerate_indices, is_unit_mod
from .regularization import (
    SymbolicValue,
    shuffle_reg_const,
    star_reg_const,
    stuffle_reg_const,
)


@dataclass(frozen=True)
class Alpha:
    """Twist exponent alpha in Z/NZ; spanning statements require a unit."""

    value: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def is_unit(self) -> bool:
        return is_unit_mod(self.value, self.modulus)


def _front(idx: Index, j: int) -> Index:
    return Index(idx.k[:j], idx.xi[:j], idx.modulus)


def _back(idx: Index, j: int) -> Index:
    return Index(idx.k[j:], idx.xi[j:], idx.modulus)


def _twist(idx: Index, j: int, alpha: Alpha) -> CycloNumber:
    """(xi_{j+1} ... xi_r)^alpha as an exact cyclotomic scalar."""
    p = RootOfUnity(0, idx.modulus)
    for x in idx.xi[j:]:
        p = p * x
    return (p ** alpha.value).as_cyclo()


def csmzv_sh_expand(idx: Index, alpha: Alpha) -> SymbolicValue:
    """Shuffle-regularized symmetric value of an index as admissible atoms."""
    if idx.modulus != alpha.modulus:
        raise ValueError("alpha and index moduli differ")
    n = idx.modulus
    out = SymbolicValue.zero(n)
    for j in range(idx.depth + 1):
        sign = -1 if sum(idx.k[j:]) % 2 else 1
        front = shuffle_reg_const(_front(idx, j))
        back = shuffle_reg_const(_back(idx, j).reverse_conj())
        term = (front * back).scale(_twist(idx, j, alpha))
        out = out + (term.scale_rational(sign) if sign < 0 else term)
    return out


def csmzv_st_expand(idx: Index, alpha: Alpha) -> SymbolicValue:
    """Harmonic-regularized symmetric value (star form on the reversed factor)."""
    if idx.modulus != alpha.modulus:
        raise ValueError("alpha and index moduli differ")
    n = idx.modulus
    out = SymbolicValue.zero(n)
    for j in range(idx.depth + 1):
        sign = -1 if sum(idx.k[j:]) % 2 else 1
        front = stuffle_reg_const(_front(idx, j))
        back = star_reg_const(_back(idx, j).reverse_conj())
        term = (front * back).scale(_twist(idx, j, alpha))
        out = out + (term.scale_rational(sign) if sign < 0 else term)
    return out


def parity_defect(idx: Index) -> SymbolicValue:
    """reg(xi; k) - (-1)^(w - r) reg(conj xi; k), a member of the PD space."""
    w, r = idx.weight, idx.depth
    sign = -1 if (w - r) % 2 else 1
    a = shuffle_reg_const(idx)
    b = shuffle_reg_const(idx.conjugate())
    return a - b.scale_rational(sign)


def antipode_sum(idx: Index) -> SymbolicValue:
    """Alternating front/back harmonic combination; identically zero."""
    n = idx.modulus
    r = idx.depth
    out = SymbolicValue.zero(n)
    for j in range(r + 1):
        sign = -1 if (r - j) % 2 else 1
        front = stuffle_reg_const(_front(idx, j))
        back_idx = _back(idx, j)
        back = star_reg_const(Index(back_idx.k[::-1], back_idx.xi[::-1], n))
        term = front * back
        out = out + (term.scale_rational(sign) if sign < 0 else term)
    return out


class PDEnumerationCap(ValueError):
    """The PD generator enumeration exceeded the configured cap."""


@dataclass
class PDSpanSet:
    """Generators spanning PD_(w,r) together with pi*i shifted lower weight."""

    modulus: int
    weight: int
    depth: int
    generators: list[SymbolicValue]
    labels: list[str]


def pd_span_set(n: int, w: int, r: int, cap: int = 4000) -> PDSpanSet:
    """Enumerate PD-space generators: lower-depth atoms with pi*i powers,
    products of two lower-weight atoms, and pi*i times lower weight.

    Deterministic order: single terms sorted by (pi power, atom key), then
    products sorted by their factor keys.
    """
    if w < 1 or r < 1:
        raise ValueError("pd_span_set requires w >= 1 and r >= 1")
    gens: list[SymbolicValue] = []
    labels: list[str] = []
    seen: set = set()

    def add_single(s: int, atom: Index | None):
        key = (s, atom.render() if atom else None)
        if key in seen:
            return
        seen.add(key)
        if atom is None:
            gens.append(SymbolicValue.pi_power(n, s))
            labels.append(f"(pi*i)^{s}")
        else:
            gens.append(SymbolicValue.from_atom(atom, pi_power=s))
            labels.append((f"(pi*i)^{s}*" if s else "") + f"zeta{atom.render()}")

    # (a) pi-power times admissible atoms of weight w - s, depth <= r - 1
    for s in range(w + 1):
        wt = w - s
        if wt == 0:
            if s >= 1:
                add_single(s, None)
            continue
        for atom in enumerate_indices(n, wt, max_depth=min(r - 1, wt), admissible_only=True):
            add_single(s, atom)

    # (c) pi*i times weight w-1 atoms of depth <= r  (pi-powers folded in)
    for s in range(1, w + 1):
        wt = w - s
        if wt == 0:
            add_single(s, None)
            continue
        for atom in enumerate_indices(n, wt, max_depth=min(r, wt), admissible_only=True):
            add_single(s, atom)

    # (b) products of two nonempty admissible atoms, depths summing to <= r,
    #     with any remaining weight in pi*i powers
    for s in range(w - 1):
        wt = w - s
        for w1 in range(1, wt):
            w2 = wt - w1
            if w1 > w2:
                continue
            for a1 in enumerate_indices(n, w1, admissible_only=True):
                for a2 in enumerate_indices(n, w2, admissible_only=True):
                    if w1 == w2 and a2.sort_key() < a1.sort_key():
                        continue
                    if a1.depth + a2.depth > r:
                        continue
                    key = (s, a1.render(), a2.render())
                    if key in seen:
                        continue
                    seen.add(key)
                    gens.append(SymbolicValue.from_atoms(n, (a1, a2), pi_power=s))
                    labels.append((f"(pi*i)^{s}*" if s else "")
                                  + f"zeta{a1.render()}*zeta{a2.render()}")
    if len(gens) > cap:
        raise PDEnumerationCap(f"{len(gens)} generators exceed cap {cap}")
    return PDSpanSet(n, w, r, gens, labels)
