"""gshift: a generalized shift operator on [-1, 1] and the approximation
machinery built on it — Jacobi polynomials and quadrature, weighted norms,
moduli of smoothness, best polynomial approximation, and empirical checks of
the direct/inverse/coincidence relationships between them."""

from .approx import (
    ApproxResult,
    DyadicDecomposition,
    DyadicLevel,
    best_approx_l2,
    best_approx_lp,
    best_approx_minimax,
    compute_E,
    dyadic_polys,
)
from .corpus import CORPUS_VERSION, CorpusFunction, default_corpus, get_function, list_functions
from .errors import (
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    EvaluationError,
    ParameterDomainError,
    SingularArgumentError,
)
from .experiments import (
    BasisDiscoveryReport,
    ClassKind,
    ClassSpec,
    CoincidenceReport,
    DecayFit,
    EmbeddingReport,
    JacksonReport,
    coincidence_report,
    discover_diagonalizing_basis,
    estimate_decay,
    verify_direct_embedding,
    verify_inverse_embedding,
    verify_jackson,
)
from .jacobi import (
    JacobiParams,
    PolynomialRep,
    QuadratureRule,
    eval_jacobi,
    fourier_jacobi_coefficient,
    gauss_jacobi_rule,
    jacobi_table,
)
from .moduli import ModulusResult, modulus, modulus_curve
from .shift import (
    DifferenceQuery,
    KernelValidationReport,
    ShiftKernelConfig,
    apply_shift,
    boundedness_ratio,
    clamped_domain,
    difference_values,
    difference_via_inclusion_exclusion,
    generalized_difference,
    kernel_B,
    shift_power,
    shift_values,
    validate_kernel,
)
from .spaces import (
    NormConfig,
    SiKind,
    SpaceParams,
    Theorem,
    WeightSpec,
    co_value,
    validate_parameters,
    weight_value,
    weighted_norm,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxResult",
    "BasisDiscoveryReport",
    "CORPUS_VERSION",
    "ClassKind",
    "ClassSpec",
    "CoincidenceReport",
    "ConvergenceError",
    "CorpusFunction",
    "DecayFit",
    "DegenerateInputError",
    "DifferenceQuery",
    "DomainError",
    "DyadicDecomposition",
    "DyadicLevel",
    "EmbeddingReport",
    "EvaluationError",
    "JacksonReport",
    "JacobiParams",
    "KernelValidationReport",
    "ModulusResult",
    "NormConfig",
    "ParameterDomainError",
    "PolynomialRep",
    "QuadratureRule",
    "ShiftKernelConfig",
    "SiKind",
    "SingularArgumentError",
    "SpaceParams",
    "Theorem",
    "WeightSpec",
    "apply_shift",
    "best_approx_l2",
    "best_approx_lp",
    "best_approx_minimax",
    "boundedness_ratio",
    "clamped_domain",
    "co_value",
    "coincidence_report",
    "compute_E",
    "default_corpus",
    "difference_values",
    "difference_via_inclusion_exclusion",
    "discover_diagonalizing_basis",
    "dyadic_polys",
    "estimate_decay",
    "eval_jacobi",
    "fourier_jacobi_coefficient",
    "gauss_jacobi_rule",
    "generalized_difference",
    "get_function",
    "jacobi_table",
    "kernel_B",
    "list_functions",
    "modulus",
    "modulus_curve",
    "shift_power",
    "shift_values",
    "validate_kernel",
    "validate_parameters",
    "verify_direct_embedding",
    "verify_inverse_embedding",
    "verify_jackson",
    "weight_value",
    "weighted_norm",
]
