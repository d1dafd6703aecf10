"""Herding-driven technology diffusion and TFP catch-up toward a moving frontier."""

__version__ = "0.1.0"

from .abm import (
    DiffusionParams,
    JumpPath,
    KirmanParams,
    Seed,
    coupled_tfp_path,
    ensemble_mean_on_grid,
    kirman_occupancy,
    simulate_adoption,
    simulate_adoption_ensemble,
    simulate_kirman,
    stationary_oracle,
)
from .calibration import (
    TfpSeries,
    TimeOrigin,
    fit_all,
    fit_catchup,
    fit_frontier,
    project,
    rank_by_gamma,
    standard_errors,
)
from .dataio import Dataset, emit_curve_samples, parse_tfp_csv, write_projection_table
from .errors import DomainError, DuplicateKeyError, NumericError, ParseError, RankDeficiencyError
from .lm import FitResult, LmOptions, lm_minimize
from .model import (
    AdoptionParams,
    CatchUpParams,
    FixedFrontierParams,
    FrontierParams,
    KremerParams,
    asymptotic_frontier_ratio,
    eval_a_fixed,
    eval_a_moving,
    eval_frontier,
    eval_s,
    eval_x,
    growth_rate_moving,
    kremer_tfp,
    rhs_adoption,
    rhs_logistic_moving,
)
from .ode import OdeProblem, Trajectory, integrate_rk4, richardson_error_estimate
