"""Marked linear Hawkes processes: simulation, limit theorems, ruin asymptotics."""

from ._backend import backend_name
from .asymptotics import (
    CltReport,
    clt_check,
    clt_variance,
    lln_mean,
    stationary_mean_intensity,
)
from .cgf import (
    CriticalPair,
    FixedPointResult,
    cluster_mgf_path,
    critical_pair,
    limit_cgf,
    limit_cgf_derivative,
    minimal_fixed_point,
)
from .ldp import (
    RatePoint,
    VariationalResult,
    closed_form_exp_marks,
    legendre_numeric,
    rate_function,
    tilted_mark_law,
    variational_rate,
)
from .risk import (
    HeavyTailAsymptotics,
    RiskModel,
    RuinEstimate,
    compound_cgf,
    finite_horizon_rate,
    heavy_tail_finite,
    heavy_tail_infinite,
    integrated_tail,
    lundberg_exponent,
    net_profit_window,
    ruin_mc,
)
from .errors import (
    ConditionWarning,
    ConfigError,
    DivergenceError,
    DomainError,
    ExplosionGuard,
    HawkesError,
    HeavyTailError,
    NetProfitError,
    NoConvergence,
    StabilityError,
    SteepnessError,
    WindowError,
)
from .model import (
    Categorical,
    ClaimLaw,
    Degenerate,
    DegenerateClaim,
    ExpClaim,
    ExpKernel,
    Exponential,
    Gamma,
    GammaClaim,
    HawkesModel,
    Kernel,
    LogNormal,
    MarkLaw,
    Pareto,
    PowerKernel,
    ValidationReport,
    Weibull,
    branching_ratio,
    claim_mean,
    claim_mgf,
    integrated_kernel,
    mark_mgf,
    mark_mgf_prime,
    validate,
)
from .simulate import (
    EventStream,
    RngSpec,
    intensity_path,
    simulate_cluster,
    simulate_thinning,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
