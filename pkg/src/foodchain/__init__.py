"""Stochastic Lotka-Volterra food chains: analytic persistence/extinction
classification cross-validated by positivity-preserving Monte Carlo."""

from .chain import (
    EffectiveRates,
    FoodChain,
    NoiseModel,
    effective_rates,
    factor_noise,
    noise_from_gamma,
    noise_from_sigma,
    validate_chain,
    zero_noise,
)
from .equilibrium import (
    EquilibriumSolution,
    SweepCoefficients,
    build_system,
    closed_form_c,
    closed_form_dn,
    forward_sweep,
    generic_solve,
)
from .errors import (
    BlowUpError,
    ConfigError,
    DimensionMismatchError,
    EmptyTrajectoryError,
    FoodChainError,
    IndexOutOfRangeError,
    InfeasibleBoundaryError,
    MalformedBoxError,
    NonPositiveCoefficientError,
    NotPositiveSemidefiniteError,
    NumericalBreakdownError,
    SingularMatrixError,
    ZeroIntracompetitionError,
)
from .persistence import (
    ClassificationReport,
    Verdict,
    apex_extension,
    classify,
    deterministic_limit_rates,
    invasion_rate,
    kappa_deterministic,
    kappa_tilde,
    lyapunov_at_boundary,
)
from .simulate import (
    SimConfig,
    Trajectory,
    drift,
    simulate_ensemble,
    simulate_ode,
    simulate_path,
    step_log_em,
)
from .stats import (
    EnsembleStats,
    OccupationMeasure,
    log_growth_rate,
    lyapunov_estimate,
    occupation,
    time_average,
)

__version__ = "0.1.0"
