"""Periodic smoothness functionals, exact averaging kernels, and the
inequality verification harness built on top of them."""

from .periodic import (
    FunctionHandle,
    GridFunction,
    QuadratureSpec,
    Resolution,
    TrigPolynomial,
    sup_norm,
    sup_norm_arg,
)
from .differences import (
    DifferenceSpec,
    central_difference,
    difference_norm,
    forward_difference,
    omega,
    omega_profile,
)
from .wfunctional import (
    WParams,
    w_multiplier,
    w_norm,
    w_pointwise,
    w_sharp,
    w_star,
    w_star_profile,
)
from .kernels import (
    binom_exact,
    c_alpha_bound,
    chi_power,
    constants_table,
    favard_constant,
    lambda_kernel,
    lambda_multiplier,
    lambda_vertices,
    triangle_kernel,
)
from .bestapprox import (
    FavardOperatorDescriptor,
    MinimaxResult,
    NonConvergenceError,
    NormalizationError,
    PeriodicSpline,
    SingularCollocationError,
    bns_ratio,
    sbs_pointwise_check,
    spline_favard,
    trig_minimax,
)
from .harness import (
    CorpusCase,
    Report,
    SuiteParams,
    UnknownSuiteError,
    default_corpus,
    empirical_constant,
    gen_corpus,
    run_suite,
)

__version__ = "0.1.0"
