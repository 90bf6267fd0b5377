"""GL(2, F_p) character tables, matrix Gauss sums, box character sums and
primitive-element counts, with brute-force cross-checks at desk scale."""

from .arith import (
    FieldElement,
    MulCharacter,
    QuadExtElement,
    arith_functions,
    classical_gauss_sum,
    mul_char_value,
    quad_ext_norm,
)
from .chartable import CharacterTable, IrrepLabel, build_table
from .errors import NotInvertibleError, VerificationError
from .gl2 import (
    BruhatFactorization,
    ClassLabel,
    Mat2,
    bruhat_factorize,
    class_inventory,
    classify_conjugacy,
    set_cardinality,
    set_membership,
)

__version__ = "0.1.0"

__all__ = [
    "BruhatFactorization",
    "CharacterTable",
    "ClassLabel",
    "FieldElement",
    "IrrepLabel",
    "Mat2",
    "MulCharacter",
    "NotInvertibleError",
    "QuadExtElement",
    "VerificationError",
    "arith_functions",
    "build_table",
    "bruhat_factorize",
    "class_inventory",
    "classical_gauss_sum",
    "classify_conjugacy",
    "mul_char_value",
    "quad_ext_norm",
    "set_cardinality",
    "set_membership",
]
