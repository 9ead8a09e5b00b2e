"""Partial fraction expansion of f(s) = 1/(sin(pi s/4) 2 xi(1/2 + s)) and related numerics.

Arbitrary precision zeta, gamma and xi evaluation, a certified table of zeta
zeros, the residues of f, truncated expansions with tail budgets, an audit of
growth exponents along a contour around the zeros, monotonicity checks and a
numerical Laplace representation of f.
"""

from .errors import *  # noqa: F401,F403
from .kernels import BACKEND
from .numkernel import DEFAULT_CONTEXT, ComplexValue, PrecisionContext, complex_derivative, complex_gamma, complex_zeta
from .xi_core import BlockName, Strip, big_xi, eval_block, sigma0, xi_symmetry_residual
from .zero_table import ZeroCache, ZeroRecord, cache_io, gap_stats, load_cache, locate_zeros, save_cache, zeta_prime_at_zero
from .coefficients import (
    CoefficientSet,
    ImagPole,
    RealPole,
    build_coefficient_set,
    c_at,
    c_tilde,
    fill_coefficients,
    p0_eval,
    series_constants,
)
from .partial_fraction import (
    ExpansionTruncation,
    RegionTag,
    classify,
    decomposition_check,
    delta_eval,
    local_term,
    p_i_eval,
    p_r_eval,
    tail_bound_A_prime,
    taylor_remainder_check,
)
from .contour_audit import AuditReport, contour_point, exponent_estimates, j_k_eval
from .asymptotics_monotonicity import (
    DRegion,
    ProductDescriptor,
    SPrime,
    b_lower_bound_check,
    complete_monotone_check,
    hadamard_xi,
    monotone_profile,
    region_member,
    sin_product_decrease,
    sin_recip_bound,
    zeta_ratio_check,
)
from .laplace_density import DensityConfig, g0_eval, lambda_eval, transform_residual

__version__ = "0.1.0"
