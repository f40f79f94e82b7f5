"""Best orthogonal trigonometric approximation of (psi, beta)-smooth function classes."""

from .approx_engine import ApproxResult, Strategy, best_orth_approx, dual_lower_bound, fourier_sum_error
from .bounds_report import (
    BoundsReport,
    OrderTable,
    SandwichConfig,
    constants_K,
    lemma_tail_check,
    order_table,
    sandwich_check,
    theorem_bounds,
    xi,
)
from .errors import (
    AdmissibilityError,
    CombinatorialBlowupError,
    DivergenceError,
    DomainError,
    GridError,
    HypothesisError,
    PsiApproxError,
    RangeError,
    SymmetryError,
    TruncationError,
)
from .extremal_functions import ClassSpec, extremal_fm, extremal_fn_star, extremal_fp, verify_membership
from .psi_families import (
    LogLogPower,
    LogPower,
    Power,
    PsiFunction,
    alpha,
    alpha_inf,
    alpha_sup,
    classify,
    cutoff_A,
    cutoff_D,
    is_convex,
    parse_psi,
    phi_s,
    phi_s_inverse,
    psi_integral,
    tail_sum,
    weighted,
)
from .trig_core import (
    FrequencySet,
    GridSpec,
    TrigPoly,
    evaluate,
    lp_norm,
    psi_beta_derivative,
    psi_beta_integral,
    sup_norm,
    vallee_poussin,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "alpha",
    "alpha_inf",
    "alpha_sup",
    "ApproxResult",
    "best_orth_approx",
    "BoundsReport",
    "classify",
    "ClassSpec",
    "CombinatorialBlowupError",
    "constants_K",
    "cutoff_A",
    "cutoff_D",
    "DivergenceError",
    "DomainError",
    "dual_lower_bound",
    "evaluate",
    "extremal_fm",
    "extremal_fn_star",
    "extremal_fp",
    "fourier_sum_error",
    "FrequencySet",
    "GridError",
    "GridSpec",
    "HypothesisError",
    "is_convex",
    "lemma_tail_check",
    "LogLogPower",
    "LogPower",
    "lp_norm",
    "order_table",
    "OrderTable",
    "parse_psi",
    "phi_s",
    "phi_s_inverse",
    "Power",
    "psi_beta_derivative",
    "psi_beta_integral",
    "psi_integral",
    "PsiApproxError",
    "PsiFunction",
    "RangeError",
    "sandwich_check",
    "SandwichConfig",
    "Strategy",
    "sup_norm",
    "SymmetryError",
    "tail_sum",
    "theorem_bounds",
    "TrigPoly",
    "TruncationError",
    "vallee_poussin",
    "verify_membership",
    "weighted",
    "xi",
]
