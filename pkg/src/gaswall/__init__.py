"""Equilibrium measures and free energies of repulsive gases with hard walls."""

from .errors import BracketError, ConvergenceError
from .identities import IdentityResult, run_all as run_identity_suites
from .loggas import (
    LogGas,
    LogGasEquilibrium,
    SINGLE_WALL_MODELS,
    critical_radius,
    edge_polynomial,
    expand_potential,
    single_wall_rate,
)
from .montecarlo import (
    DensityHistogram,
    GasConfig,
    MCResult,
    density_distance,
    initial_positions,
    metropolis_run,
)
from .potentials import (
    RadialPotential,
    monomial,
    monomial_sum,
    quadratic,
    quartic,
    zero_potential,
)
from .special import (
    ChebExpansion,
    bessel_i,
    bessel_k,
    cheb_prime_expansion,
    chebyshev_coefficients,
    chebyshev_log_moment,
    chebyshev_t,
    gauss_chebyshev,
    multipole_log_partial_sum,
)
from .transition import (
    CubicFit,
    FreeEnergyCurve,
    TransitionReport,
    continuity_report,
    cubic_coefficient,
    cubic_fit,
    fit_grid,
    jump_estimate,
    sweep,
)
from .yukawa import (
    LimitReport,
    YukawaGas,
    YukawaParams,
    interaction,
    kernel_ratio,
    limit_consistency,
    shell_average,
    shell_factor,
)

__version__ = "0.1.0"
