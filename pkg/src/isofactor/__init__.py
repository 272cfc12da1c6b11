"""Classification and involution factorizations of complex hyperbolic isometries.

Matrices act on ``C^{n,1}`` with the form ``<z, w> = w^H J z``,
``J = diag(-1, 1, ..., 1)``.
"""

__version__ = "0.1.0"

from .antiholo import AntiholoMap, antiholo_compose, antiholo_split, commutator_antiholo
from .classify import (
    EigenvalueType,
    IsometryClass,
    classify_isometry,
    eigenvalue_type,
    parabolic_split,
    reflection_kind,
    rescale_to_unit_null_eigenvalue,
)
from .errors import IsofactorError
from .factorization import Factor, Factorization, FactorTag
from .forms import (
    HermitianSpace,
    VectorKind,
    classify_vector,
    gram_signature,
    inner_product,
    is_form_unitary,
)
from .gen import GenSpec, generate
from .spectral import eigen_structure, minimal_poly_exponent, schur, unitary_log_sample
from .sun_factor import commutator_split, factor_su, two_reversible_split
from .tolerances import Tolerances
from .un1_factor import decompose, hermitian_witness, strongly_reversible_split_un1
from .verify import brute_reversibility, check_factorization, check_involution

__all__ = [
    "AntiholoMap",
    "EigenvalueType",
    "Factor",
    "FactorTag",
    "Factorization",
    "GenSpec",
    "HermitianSpace",
    "IsofactorError",
    "IsometryClass",
    "Tolerances",
    "VectorKind",
    "antiholo_compose",
    "antiholo_split",
    "brute_reversibility",
    "check_factorization",
    "check_involution",
    "classify_isometry",
    "classify_vector",
    "commutator_antiholo",
    "commutator_split",
    "decompose",
    "eigen_structure",
    "eigenvalue_type",
    "factor_su",
    "generate",
    "gram_signature",
    "hermitian_witness",
    "inner_product",
    "is_form_unitary",
    "minimal_poly_exponent",
    "parabolic_split",
    "reflection_kind",
    "rescale_to_unit_null_eigenvalue",
    "schur",
    "strongly_reversible_split_un1",
    "two_reversible_split",
    "unitary_log_sample",
]
