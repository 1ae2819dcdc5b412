"""Exact rational linear algebra, LP feasibility and univariate root isolation."""

from .identities import (
    NotInKernel,
    OnesNotInRowSpan,
    ShapeMismatch,
    cauchy_binet_identity_check,
    cauchy_binet_sum,
)
from .lp import fourier_motzkin, phase_one, positive_dependence, strict_cone_feasible
from .matrix import (
    RationalMatrix,
    determinant,
    dot,
    inverse,
    kernel_basis,
    primitive_integer,
    rank,
    rref,
    solve,
    to_fraction,
)
from .univariate import (
    UnivariatePoly,
    isolate_real_roots,
    poly_gcd,
    rational_root_in,
    refine_root,
    sign_variations,
    squarefree_part,
    sturm_sequence,
)

__all__ = [
    "RationalMatrix", "rank", "determinant", "rref", "kernel_basis", "solve", "inverse",
    "primitive_integer", "dot", "to_fraction",
    "strict_cone_feasible", "fourier_motzkin", "phase_one", "positive_dependence",
    "UnivariatePoly", "isolate_real_roots", "refine_root", "rational_root_in",
    "sign_variations", "squarefree_part", "sturm_sequence", "poly_gcd",
    "cauchy_binet_identity_check", "cauchy_binet_sum",
    "ShapeMismatch", "NotInKernel", "OnesNotInRowSpan",
]
