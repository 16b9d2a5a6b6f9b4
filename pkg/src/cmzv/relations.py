"""Integer-relation detection over K_N and the empirical spanning test.

A K_N-linear relation among complex values is searched by expanding each
unknown coefficient over the power basis (phi(N) integer unknowns per value)
and running PSLQ on the combined real/imaginary embedding x = Re + lambda*Im
with a fixed irrational lambda; candidate relations are accepted only when
the real and imaginary residuals vanish separately and the relation
re-verifies at doubled precision.  Absence of a relation is always heuristic
and is labeled as such in reports.

Membership problems with many generators are first reduced exactly: products
of atoms are flattened through the quasi-shuffle product, the vectors are
rewritten modulo a pool of exact double-shuffle identities (products of two
values expanded both through words and through indices, plus their
regularized variants), and generators that are formally dependent on earlier
ones are pruned.  The surviving lattice is what PSLQ sees; the final
certificate is still verified end to end against the original values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from mpmath import mp, mpc, mpf, pslq

from .cyclotomic import (
    CycloNumber,
    Index,
    euler_phi,
    enumerate_indices,
    is_unit_mod,
)
from .numerics import BigComplex, EvalConfig, eval_symbolic, pi_i
from .regularization import (
    SymbolicValue,
    shuffle_reg_poly,
    shuffle_reg_word,
    stuffle_reg_combination,
    stuffle_reg_const,
)
from .symmetric_values import Alpha, csmzv_sh_expand
from .word_algebra import (
    IndexCombination,
    Word,
    index_to_word,
    shuffle,
    shuffle_word_pair,
    stuffle,
    stuffle_combinations,
)

# a flattened vector maps (pi-power, atom-or-None) to an exact coefficient
FlatKey = tuple[int, Index | None]
FlatVec = dict[FlatKey, CycloNumber]


def flatten_symbolic(v: SymbolicValue) -> FlatVec:
    """Rewrite products of atoms through the quasi-shuffle product.

    Exact on admissible atoms: the product of the nested series is the
    stuffle expansion.  The result involves single atoms only.
    """
    n = v.modulus
    out: FlatVec = {}

    def bump(key: FlatKey, c: CycloNumber):
        prev = out.get(key)
        tot = c if prev is None else prev + c
        if tot.is_zero:
            out.pop(key, None)
        else:
            out[key] = tot

    for (s, atoms), coeff in v.terms.items():
        if len(atoms) <= 1:
            bump((s, atoms[0] if atoms else None), coeff)
            continue
        comb = IndexCombination.from_index(atoms[0])
        for a in atoms[1:]:
            comb = stuffle_combinations(comb, IndexCombination.from_index(a))
        for idx, c in comb.terms.items():
            bump((s, idx if idx.depth else None), c * coeff)
    return out


def _flat_order(key: FlatKey):
    s, atom = key
    if atom is None:
        return (0, s, 0, (), ())
    return (1, s, atom.depth, atom.k, atom.xi_exponents())


class _Echelon:
    """Row-echelon basis over K_N for exact vectors on hashable coordinates.

    With ``track=True`` every row remembers its expression as a combination
    of the inserted source vectors, so formal membership of a reduced-to-zero
    vector comes with explicit coefficients.
    """

    def __init__(self, track: bool = False):
        self.rows: dict[FlatKey, FlatVec] = {}
        self.track = track
        self.combos: dict[FlatKey, dict[int, CycloNumber]] = {}

    def _eliminate(self, vec: FlatVec, combo: dict[int, CycloNumber] | None):
        changed = True
        while changed:
            changed = False
            for key in sorted(vec, key=_flat_order, reverse=True):
                row = self.rows.get(key)
                if row is None or vec.get(key) is None:
                    continue
                c = vec[key]
                for k2, c2 in row.items():
                    prev = vec.get(k2)
                    tot = (prev - c * c2) if prev is not None else -(c * c2)
                    if tot.is_zero:
                        vec.pop(k2, None)
                    else:
                        vec[k2] = tot
                if combo is not None:
                    for gi, cc in self.combos[key].items():
                        prev = combo.get(gi)
                        tot = (prev - c * cc) if prev is not None else -(c * cc)
                        if tot.is_zero:
                            combo.pop(gi, None)
                        else:
                            combo[gi] = tot
                changed = True
                break
        return vec, combo

    def reduce(self, vec: FlatVec) -> FlatVec:
        out, _ = self._eliminate(dict(vec), None)
        return out

    def reduce_with_combo(self, vec: FlatVec) -> tuple[FlatVec, dict[int, CycloNumber]]:
        """Reduce; the combo expresses the eliminated part over source vectors."""
        red, combo = self._eliminate(dict(vec), {})
        # vec = red + sum(-combo_gi * source_gi)  =>  flip sign for membership
        return red, {gi: -c for gi, c in combo.items()}

    def insert(self, vec: FlatVec, source: int | None = None) -> bool:
        combo = {source: CycloNumber.one(next(iter(vec.values())).modulus)} if (
            self.track and source is not None and vec) else ({} if self.track else None)
        red, combo = self._eliminate(dict(vec), combo)
        if not red:
            return False
        pivot = max(red, key=_flat_order)
        inv = red[pivot].inverse()
        row = {k: c * inv for k, c in red.items()}
        row[pivot] = CycloNumber.one(row[pivot].modulus)
        self.rows[pivot] = row
        if self.track:
            self.combos[pivot] = {gi: c * inv for gi, c in (combo or {}).items()}
        return True


def _divergent_indices(n: int, weight: int) -> list[Index]:
    return [i for i in enumerate_indices(n, weight) if not i.is_admissible]


def _h1_words(n: int, length: int) -> list[Word]:
    if length == 0:
        return [Word((), n)]
    out = []

    def rec(prefix):
        if len(prefix) == length:
            out.append(Word(tuple(prefix), n))
            return
        choices = range(n) if not prefix else [-1, *range(n)]
        for l in choices:
            rec(prefix + [l])

    rec([])
    return out


@lru_cache(maxsize=None)
def exact_reduction_context(n: int, weight: int) -> _Echelon:
    """Echelon basis of exact weight-homogeneous relations among single atoms.

    Sources: double-shuffle pairs (a product of two admissible values
    expanded through indices and through words must agree) and regularized
    double shuffle on both sides (the regularized evaluation maps are algebra
    homomorphisms, so products against divergent indices/words give exact
    identities with the T = 0 convention).
    """
    ech = _Echelon()

    def feed(sv_a: SymbolicValue, sv_b: SymbolicValue):
        va, vb = flatten_symbolic(sv_a), flatten_symbolic(sv_b)
        diff = dict(va)
        for k, c in vb.items():
            prev = diff.get(k)
            tot = (prev - c) if prev is not None else -c
            if tot.is_zero:
                diff.pop(k, None)
            else:
                diff[k] = tot
        if diff:
            ech.insert(diff)

    def sym_from_comb(comb: IndexCombination) -> SymbolicValue:
        out = SymbolicValue.zero(n)
        for idx, c in comb.terms.items():
            if idx.depth:
                out = out + SymbolicValue.from_atom(idx, c)
            else:
                out = out + SymbolicValue.one(n).scale(c)
        return out

    from .regularization import _h0_poly_to_symbolic

    # finite double shuffle: admissible x admissible
    for w1 in range(1, weight):
        w2 = weight - w1
        if w1 > w2:
            continue
        for a in enumerate_indices(n, w1, admissible_only=True):
            for b in enumerate_indices(n, w2, admissible_only=True):
                if w1 == w2 and b.sort_key() < a.sort_key():
                    continue
                st = sym_from_comb(stuffle(a, b))
                sh = _h0_poly_to_symbolic(shuffle_word_pair(index_to_word(a), index_to_word(b)))
                feed(st, sh)

    # harmonic regularized double shuffle: divergent x anything
    for w1 in range(1, weight):
        w2 = weight - w1
        for d in _divergent_indices(n, w1):
            for e in enumerate_indices(n, w2):
                if not e.is_admissible and (w2 < w1 or (w2 == w1 and e.sort_key() < d.sort_key())):
                    continue
                lhs = stuffle_reg_combination(stuffle(d, e))
                rhs = stuffle_reg_const(d) * stuffle_reg_const(e)
                feed(lhs, rhs)

    # shuffle regularized double shuffle: divergent word x any h^1 word
    for w1 in range(1, weight):
        w2 = weight - w1
        for u in _h1_words(n, w1):
            if u.in_h0:
                continue
            for v in _h1_words(n, w2):
                if not v.in_h0 and (w2 < w1 or (w2 == w1 and v.letters < u.letters)):
                    continue
                lhs = shuffle_reg_poly(shuffle_word_pair(u, v))
                rhs = shuffle_reg_word(u) * shuffle_reg_word(v)
                feed(lhs, rhs)

    return ech


def reduce_exact(v: SymbolicValue) -> FlatVec:
    """Flatten and rewrite modulo the exact relation pool of its weight."""
    flat = flatten_symbolic(v)
    if not flat:
        return flat
    weights = {s + (a.weight if a else 0) for (s, a) in flat}
    out: FlatVec = {}
    for w in sorted(weights):
        part = {k: c for k, c in flat.items() if k[0] + (k[1].weight if k[1] else 0) == w}
        red = exact_reduction_context(v.modulus, w).reduce(part)
        for k, c in red.items():
            prev = out.get(k)
            tot = c if prev is None else prev + c
            if tot.is_zero:
                out.pop(k, None)
            else:
                out[k] = tot
    return out


# ---------------------------------------------------------------------------
# PSLQ kernel
# ---------------------------------------------------------------------------


@dataclass
class RelationProblem:
    """Numeric integer-relation search over K_N coefficients."""

    values: list[BigComplex]
    labels: list[str]
    modulus: int = 1
    coeff_bound: int = 10 ** 6
    symbolics: list[SymbolicValue] | None = None


@dataclass
class RelationResult:
    coeffs: list[CycloNumber]
    residual: mpf
    search_dps: int
    verified_dps: int

    def max_height(self) -> int:
        h = 0
        for c in self.coeffs:
            for q in c.coeffs:
                h = max(h, abs(q.numerator), q.denominator)
        return h


class PrecisionPolicy(ValueError):
    """Raised when the requested precision is below the hard floor."""


def _lambda_ladder():
    for p in (2, 3, 5):
        yield mp.sqrt(p) / 2


def _pslq_complex(values: list[mpc], dps: int, coeff_bound: int) -> list[int] | None:
    """One integer relation among complex values (both parts must vanish).

    A value that is zero to working precision admits the trivial unit
    relation and is reported as such immediately.
    """
    n = len(values)
    maxsteps = 6000 + 500 * n
    with mp.workdps(dps):
        scale = max((abs(v) for v in values), default=mpf(1))
        if scale == 0:
            return None
        floor = scale * mpf(10) ** (-dps + 8)
        for i, v in enumerate(values):
            if abs(v) < floor:
                rel = [0] * n
                rel[i] = 1
                return rel
        tol = mpf(10) ** (-dps + 12)
        for lam in _lambda_ladder():
            xs = [(v.real + lam * v.imag) / scale for v in values]
            rel = pslq(xs, tol=tol, maxcoeff=coeff_bound, maxsteps=maxsteps)
            if rel is None:
                return None
            re_res = abs(sum(c * v.real for c, v in zip(rel, values)))
            im_res = abs(sum(c * v.imag for c, v in zip(rel, values)))
            bound = scale * mpf(10) ** (-int(dps * 0.5))
            if re_res < bound and im_res < bound:
                return [int(c) for c in rel]
            # lambda conspiracy: try the next deterministic lambda
        return None


def _expand_basis(values: list[BigComplex], n: int, dps: int) -> tuple[list[mpc], int]:
    """Each value contributes phi(N) inputs v * zeta^j for the K_N search."""
    phi = euler_phi(n)
    with mp.workdps(dps):
        zetas = [mp.expjpi(mpf(2 * j) / n) for j in range(phi)]
        out = []
        for v in values:
            base = v.value
            for j in range(phi):
                out.append(base * zetas[j])
    return out, phi


def _coeffs_from_ints(ints: list[int], n: int) -> list[CycloNumber]:
    phi = euler_phi(n)
    out = []
    for i in range(0, len(ints), phi):
        out.append(CycloNumber(tuple(Fraction(c) for c in ints[i:i + phi]), n))
    return out


def _residual(values: list[BigComplex], coeffs: list[CycloNumber], dps: int) -> mpf:
    with mp.workdps(dps):
        acc = mpc(0)
        for v, c in zip(values, coeffs):
            acc += v.value * c.embed(dps)
        return abs(acc)


def find_relation(problem: RelationProblem, precision: int | None = None,
                  cutoff: int = 10000, accel_order: int = 6) -> RelationResult | None:
    """Search a K_N-integer relation among the problem values.

    Returns None when no relation with coefficients up to the bound is found
    at the working precision; that outcome is heuristic, never a proof.
    When the problem carries symbolic descriptions the candidate is
    re-verified at doubled precision before being returned.
    """
    if len(problem.values) < 2:
        raise ValueError("need at least 2 values")
    n = problem.modulus
    nvals = len(problem.values) * euler_phi(n)
    precision = precision or max(30, 20 + 3 * nvals)
    if precision < 16:
        raise PrecisionPolicy("precision below the hard floor of 16 digits")
    expanded, phi = _expand_basis(problem.values, n, precision)
    ints = _pslq_complex(expanded, precision, problem.coeff_bound)
    if ints is None:
        return None
    coeffs = _coeffs_from_ints(ints, n)
    res = _residual(problem.values, coeffs, precision)
    verified_dps = precision
    if problem.symbolics is not None:
        vdps = max(2 * precision, precision + 30)
        vcfg = EvalConfig(precision=vdps, cutoff=cutoff, accel_order=accel_order)
        fresh = [eval_symbolic(s, vcfg) for s in problem.symbolics]
        vres = _residual(fresh, coeffs, vdps)
        if vres > mpf(10) ** (-precision):
            return None
        res = vres
        verified_dps = vdps
    return RelationResult(coeffs, res, precision, verified_dps)


# ---------------------------------------------------------------------------
# membership witnesses and the spanning test
# ---------------------------------------------------------------------------


@dataclass
class Witness:
    """Decomposition of a target over generators with verified residual."""

    coefficients: list[CycloNumber]  # one per original generator (zeros for pruned)
    residual: mpf
    search_dps: int
    pruned_to: int


@dataclass
class SpanRow:
    atom: str
    status: str  # "ok" or "fail"
    coefficients: list[str]
    residual: str
    note: str = ""


@dataclass
class SpanReport:
    modulus: int
    alpha: int
    weight: int
    precision: int
    generator_labels: list[str]
    rows: list[SpanRow] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(1 for r in self.rows if r.status != "ok")

    def to_dict(self) -> dict:
        return {
            "N": self.modulus,
            "alpha": self.alpha,
            "weight": self.weight,
            "precision": self.precision,
            "alpha_is_unit": is_unit_mod(self.alpha, self.modulus),
            "generators": self.generator_labels,
            "rows": [
                {
                    "atom": r.atom,
                    "status": r.status,
                    "coefficients": r.coefficients,
                    "residual": r.residual,
                    "note": r.note,
                }
                for r in self.rows
            ],
            "failures": self.failures,
            "absence_note": "failures are heuristic: no relation found within bounds",
        }


def _values_for(symbolics: list[SymbolicValue], dps: int, cfg: EvalConfig) -> list[BigComplex]:
    # beyond ~450 digits the default cutoff cannot carry the expansion order,
    # so scale it with the precision demand
    cut = cfg.cutoff if dps <= 450 else cfg.cutoff * 10
    ecfg = EvalConfig(precision=dps, cutoff=cut, accel_order=cfg.accel_order)
    return [eval_symbolic(s, ecfg) for s in symbolics]


def _verify_combination(target: SymbolicValue, gens: list[SymbolicValue],
                        coeffs: list[CycloNumber], dps: int, cfg: EvalConfig) -> mpf:
    vals = _values_for([target] + list(gens), dps, cfg)
    with mp.workdps(dps):
        return abs(vals[0].value
                   - sum((vals[1 + i].value * coeffs[i].embed(dps)
                          for i in range(len(gens)) if not coeffs[i].is_zero), mpc(0)))


def congruence_witness(target: SymbolicValue, gens: list[SymbolicValue],
                       cfg: EvalConfig | None = None,
                       coeff_bound: int = 10 ** 6,
                       session: dict | None = None) -> Witness | None:
    """Express the target over the generator span with a verified residual.

    Generators are pruned exactly first (flattening plus the double-shuffle
    relation pool).  When the reduced target lies in the formal span of the
    reduced generators the exact coefficients are read off directly;
    otherwise PSLQ searches a relation with a nonzero target coefficient,
    dropping generators that participate in verified generator-only
    relations.  Every accepted relation re-verifies at doubled precision.
    A session dict carries verified generator drops across targets that
    share a generator list.
    """
    cfg = cfg or EvalConfig(precision=60)
    n = target.modulus
    phi = euler_phi(n)

    tvec = reduce_exact(target)
    if not tvec:
        # the target is an exact combination of pool relations, i.e. exactly 0;
        # still check the numeric value as a backstop against a corrupt pool
        res = eval_symbolic(target, cfg).magnitude()
        if res < mpf(10) ** (-cfg.precision + 10):
            return Witness([CycloNumber.zero(n)] * len(gens), res, cfg.precision, 0)

    ech = _Echelon(track=True)
    kept: list[int] = []
    for i, g in enumerate(gens):
        gvec = reduce_exact(g)
        if not gvec:
            continue
        if ech.insert(gvec, source=i):
            kept.append(i)

    # formal fast path: the pool relations already witness the membership
    tred, combo = ech.reduce_with_combo(tvec)
    if not tred:
        out = [CycloNumber.zero(n)] * len(gens)
        for gi, c in combo.items():
            out[gi] = c
        res = _verify_combination(target, gens, out, max(cfg.precision, 60), cfg)
        if res < mpf(10) ** (-cfg.precision + 10):
            return Witness(out, res, cfg.precision, len(kept))

    if session is not None:
        kept = [i for i in kept if i not in session.get("dropped", set())]

    base = max(cfg.precision, 24 + 3 * phi * (len(kept) + 1))
    dps0 = 30 * ((base + 29) // 30)
    for dps in (dps0, 2 * dps0, int(3.5 * dps0)):
        active = list(kept)
        while active:
            symbolics = [target] + [gens[i] for i in active]
            values = _values_for(symbolics, dps, cfg)
            expanded, _ = _expand_basis(values, n, dps)
            ints = _pslq_complex(expanded, dps, coeff_bound)
            if ints is None:
                break
            coeffs = _coeffs_from_ints(ints, n)
            # every accepted relation is re-verified at doubled precision
            vdps = max(2 * dps, dps + 30)
            fresh = _values_for(symbolics, vdps, cfg)
            vres = _residual(fresh, coeffs, vdps)
            if vres > mpf(10) ** (-dps):
                break  # spurious at this precision; escalate
            if coeffs[0].is_zero:
                # verified generator-only relation: drop the heaviest participant
                heaviest = max(
                    (j for j in range(1, len(coeffs)) if not coeffs[j].is_zero),
                    key=lambda j: max(abs(q) for q in coeffs[j].coeffs),
                )
                if session is not None:
                    session.setdefault("dropped", set()).add(active[heaviest - 1])
                active = active[:heaviest - 1] + active[heaviest:]
                continue
            inv = -coeffs[0].inverse()
            out = [CycloNumber.zero(n)] * len(gens)
            for pos, gi in enumerate(active):
                out[gi] = coeffs[pos + 1] * inv
            full_res = _verify_combination(target, gens, out, vdps, cfg)
            return Witness(out, full_res, dps, len(active))
    return None


def spanning_test(n: int, alpha: Alpha, weight: int, cfg: EvalConfig | None = None,
                  depth_cap: int | None = None, coeff_bound: int = 10 ** 6) -> SpanReport:
    """Decompose every admissible atom of the weight over symmetric-value
    generators plus pi*i-shifted lower-weight generators."""
    cfg = cfg or EvalConfig(precision=60)
    depth_cap = depth_cap or weight
    gens: list[SymbolicValue] = []
    labels: list[str] = []
    for j in range(weight + 1):
        wt = weight - j
        prefix = "" if j == 0 else (f"(pi*i)*" if j == 1 else f"(pi*i)^{j}*")
        if wt == 0:
            gens.append(SymbolicValue.pi_power(n, j))
            labels.append(f"(pi*i)^{j}")
            continue
        for idx in enumerate_indices(n, wt, max_depth=depth_cap):
            sv = csmzv_sh_expand(idx, alpha)
            if j:
                sv = SymbolicValue.pi_power(n, j) * sv
            if sv.is_zero:
                continue
            gens.append(sv)
            labels.append(f"{prefix}zetaS{idx.render()}")
    report = SpanReport(n, alpha.value, weight, cfg.precision, labels)
    session: dict = {}
    for atom in enumerate_indices(n, weight, admissible_only=True):
        target = SymbolicValue.from_atom(atom)
        w = congruence_witness(target, gens, cfg, coeff_bound, session=session)
        if w is None:
            floor = mpf(10) ** (-cfg.precision // 2)
            report.rows.append(SpanRow(atom.render(), "fail", [],
                                       mp.nstr(floor, 5),
                                       "no relation within bounds (heuristic)"))
        else:
            coeffs = [str(c) for c in w.coefficients]
            report.rows.append(SpanRow(atom.render(), "ok", coeffs, mp.nstr(w.residual, 5)))
    return report
