"""Cyclotomic multiple zeta values: exact word algebras, regularization,
symmetric values, arbitrary-precision evaluation and relation detection."""

from .cyclotomic import CycloNumber, Index, RootOfUnity, cyclo_embed, cyclo_mul, is_admissible
from .numerics import BigComplex, EvalConfig, eval_cmzv, eval_symbolic, eval_weight1_closed, pi_i
from .regularization import (
    RegDecomposition,
    SymbolicValue,
    shuffle_reg_const,
    shuffle_reg_decompose,
    stuffle_reg_const,
)
from .relations import RelationProblem, congruence_witness, find_relation, spanning_test
from .symmetric_values import (
    Alpha,
    antipode_sum,
    csmzv_sh_expand,
    csmzv_st_expand,
    parity_defect,
    pd_span_set,
)
from .word_algebra import (
    IndexCombination,
    NCPoly,
    Word,
    index_to_word,
    reverse_conj,
    shuffle,
    star_expand,
    stuffle,
    word_to_index,
)

__version__ = "0.1.0"

__all__ = [
    "Alpha", "BigComplex", "CycloNumber", "EvalConfig", "Index",
    "IndexCombination", "NCPoly", "RegDecomposition", "RelationProblem",
    "RootOfUnity", "SymbolicValue", "Word", "antipode_sum", "congruence_witness",
    "csmzv_sh_expand", "csmzv_st_expand", "cyclo_embed", "cyclo_mul",
    "eval_cmzv", "eval_symbolic", "eval_weight1_closed", "find_relation",
    "index_to_word", "is_admissible", "parity_defect", "pd_span_set", "pi_i",
    "reverse_conj", "shuffle", "shuffle_reg_const", "shuffle_reg_decompose",
    "spanning_test", "star_expand", "stuffle", "stuffle_reg_const",
    "word_to_index",
]
