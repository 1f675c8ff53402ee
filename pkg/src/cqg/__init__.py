"""Representation calculus for compact quantum groups at desk scale.

Finite fragments of fusion data with rho-operator spectra, quantum
dimensions, Clebsch-Gordan isometries, spectral projections, and the
verification suite built on them.
"""

from .dimensions import (
    FORCED_SYMMETRIC,
    NO_CONCLUSION,
    EigenLists,
    dim_t,
    eigen_lists,
    gamma,
    growth_inequality_check,
    power_sum_uniqueness,
    symmetry_by_conjugate,
    symmetry_check,
    symmetry_sweep,
)
from .errors import (
    CGUnavailableError,
    CQGError,
    ModelConsistencyError,
    ModelSchemaError,
    PreconditionError,
    TruncationError,
)
from .fusion import (
    Decomposition,
    decompose,
    frobenius_check,
    gamma_top_components,
    p_n,
    tensor_power_decompose,
)
from .intertwiners import (
    C00Element,
    CGTensor,
    cg_set,
    cg_supplement_document,
    delta_hat,
    haar_weight,
    verify_cg_unitarity,
    verify_coassociativity,
    verify_modular,
)
from .kac_degree import (
    SequenceStep,
    ThetaForm,
    bounded_degree_identity_check,
    corollary_6_5_probe,
    is_kac,
    lemma_6_3_check,
    main_inequality_eval,
    main_theorem_sequence,
    n_G,
    prop_6_2_check,
    standard_polynomial,
    subsequence_refine,
    theta_normal_form,
)
from .models import (
    builtin_finite_group_dual,
    builtin_free_orthogonal_fund,
    builtin_su_q_2,
    resolve_builtin,
    rho_defining_property_oracle,
)
from .rep_data import (
    DEFAULT_TOLERANCE,
    FusionTable,
    Irrep,
    QGModel,
    RhoSpectrum,
    Tolerance,
    ValidationIssue,
    ValidationReport,
    load_model,
    load_model_with_report,
    model_to_document,
    normalize_rho,
    validate_model,
)
from .spectral import (
    SpectralProjection,
    eigenspace_dim,
    spectral_grid,
    spectral_projection,
    tensor_projection_pairs,
    verify_theorem_5_3,
)

__version__ = "0.1.0"

__all__ = [
    "CQGError",
    "ModelSchemaError",
    "ModelConsistencyError",
    "TruncationError",
    "CGUnavailableError",
    "PreconditionError",
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "RhoSpectrum",
    "normalize_rho",
    "Irrep",
    "FusionTable",
    "QGModel",
    "ValidationIssue",
    "ValidationReport",
    "validate_model",
    "load_model",
    "load_model_with_report",
    "model_to_document",
    "EigenLists",
    "FORCED_SYMMETRIC",
    "NO_CONCLUSION",
    "dim_t",
    "gamma",
    "eigen_lists",
    "symmetry_check",
    "symmetry_by_conjugate",
    "symmetry_sweep",
    "power_sum_uniqueness",
    "growth_inequality_check",
    "Decomposition",
    "decompose",
    "tensor_power_decompose",
    "p_n",
    "gamma_top_components",
    "frobenius_check",
    "CGTensor",
    "C00Element",
    "cg_set",
    "verify_cg_unitarity",
    "delta_hat",
    "haar_weight",
    "verify_modular",
    "verify_coassociativity",
    "cg_supplement_document",
    "SpectralProjection",
    "spectral_projection",
    "eigenspace_dim",
    "tensor_projection_pairs",
    "spectral_grid",
    "verify_theorem_5_3",
    "ThetaForm",
    "SequenceStep",
    "is_kac",
    "n_G",
    "standard_polynomial",
    "bounded_degree_identity_check",
    "prop_6_2_check",
    "theta_normal_form",
    "main_theorem_sequence",
    "lemma_6_3_check",
    "subsequence_refine",
    "main_inequality_eval",
    "corollary_6_5_probe",
    "builtin_su_q_2",
    "builtin_finite_group_dual",
    "builtin_free_orthogonal_fund",
    "rho_defining_property_oracle",
    "resolve_builtin",
    "__version__",
]
