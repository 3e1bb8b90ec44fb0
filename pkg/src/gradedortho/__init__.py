"""Grading-preserving orthonormalization of vector systems.

Orthonormalizes a graded family of linearly independent vectors level
by level: each level is projected against all finished lower levels and
then normalized symmetrically via the inverse square root of its
projected Gram block, so the grading survives.  Singleton levels
reproduce classical Gram-Schmidt; a single level reproduces the Gram
(Loewdin) method.  A signed variant handles nondegenerate indefinite
metrics, including promotion of lone isotropic vectors into the next
level.  Gram matrices come from explicit input, weighted Fourier bases
on the circle, or multivariate monomial bases on boxes.
"""

from ._version import __version__
from .errors import (
    DegenerateMetric,
    DimensionMismatch,
    GradedOrthoError,
    InsufficientGrid,
    LevelNotReady,
    LinearlyDependentInput,
    NoConvergence,
    NonPositiveWeight,
    NonSquare,
    NotACounterexample,
    NotHermitian,
    NotPositiveDefinite,
    QuadratureOrderTooLow,
    SchemaError,
    ShapeMismatch,
    TerminalIsotropicVector,
)
from .grading import GradedIndex
from .gram import (
    GramSource,
    MonomialBasisSpec,
    WeightFunction,
    build_explicit,
    fourier_gram,
    full_gram,
    monomial_gram,
    monomial_index,
)
from .kernels import active_backend, set_backend
from .ortho import (
    CoefficientTable,
    VerificationReport,
    cross_overlap,
    gram_method_reference,
    gram_schmidt_reference,
    level_normalizer,
    mixing_block,
    orthonormalize_graded,
    residual_gram,
    residual_gram_direct,
    verify_table,
)
from .pseudo import (
    FailureTrace,
    SignedCoefficientTable,
    gram_schmidt_isotropic_obstruction,
    is_lone_isotropic,
    pseudo_orthonormalize_graded,
)
from .spectral import (
    DEFAULT_DEGENERACY_TOL,
    EigenDecomposition,
    eigh,
    hermitize,
    inv_sqrt,
    pseudo_normalizer,
    signature_split,
)

__all__ = [
    "__version__",
    "DEFAULT_DEGENERACY_TOL",
    "CoefficientTable",
    "DegenerateMetric",
    "DimensionMismatch",
    "EigenDecomposition",
    "FailureTrace",
    "GradedIndex",
    "GradedOrthoError",
    "GramSource",
    "InsufficientGrid",
    "LevelNotReady",
    "LinearlyDependentInput",
    "MonomialBasisSpec",
    "NoConvergence",
    "NonPositiveWeight",
    "NonSquare",
    "NotACounterexample",
    "NotHermitian",
    "NotPositiveDefinite",
    "QuadratureOrderTooLow",
    "SchemaError",
    "ShapeMismatch",
    "SignedCoefficientTable",
    "TerminalIsotropicVector",
    "VerificationReport",
    "WeightFunction",
    "active_backend",
    "build_explicit",
    "cross_overlap",
    "eigh",
    "fourier_gram",
    "full_gram",
    "gram_method_reference",
    "gram_schmidt_isotropic_obstruction",
    "gram_schmidt_reference",
    "hermitize",
    "inv_sqrt",
    "is_lone_isotropic",
    "level_normalizer",
    "mixing_block",
    "monomial_gram",
    "monomial_index",
    "orthonormalize_graded",
    "pseudo_normalizer",
    "pseudo_orthonormalize_graded",
    "residual_gram",
    "residual_gram_direct",
    "set_backend",
    "signature_split",
    "verify_table",
]
