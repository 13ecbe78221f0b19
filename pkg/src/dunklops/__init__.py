"""Dunkl-weighted Szasz-Beta positive linear operators.

A numerical library for the beta-prime-kernel generalization of the
Dunkl-Szasz operator: stable evaluation on arbitrary test functions,
exact raw and central moments, and empirical verification of the moment
bounds and convergence-rate statements that govern the operator family.
"""

from .core import (
    DunklParams,
    LogCoefficient,
    SeriesPolicy,
    dunkl_exp,
    dunkl_exp_odd_part,
    gamma_nu_ratio_check,
    log_dunkl_exp,
    log_gamma_nu,
    log_gamma_nu_closed,
    theta,
)
from .corpus import corpus, get_function, load_sampled_function
from .errors import (
    ConfigInvalid,
    DunklDomainError,
    GrowthTooLarge,
    MalformedTable,
    MomentDiverges,
    NonMonotoneAbscissae,
    QuadratureNoConverge,
    TermBudgetExceeded,
)
from .kernels import (
    KernelSpec,
    QuadraturePolicy,
    kernel_integral,
    kernel_mean,
    kernel_moment_closed,
    log_beta,
)
from .moments import (
    BoundReport,
    MomentSet,
    bound_sweep,
    central_moments,
    central_moments_direct,
    check_lemma2,
    check_lemma3,
)
from .operators import (
    IntegralCache,
    OperatorQuery,
    TestFunction,
    szasz_beta_dunkl,
    szasz_beta_dunkl_monomial,
    szasz_dunkl,
)
from .rates import (
    RateReport,
    check_k_functional_rate,
    check_korovkin,
    check_lipschitz_rate,
    check_modulus_rate,
    check_weighted_convergence,
    check_weighted_modulus_rate,
    empirical_order,
)
from .smoothness import ModulusEstimate, modulus, second_modulus, weighted_modulus

__version__ = "0.1.0"
