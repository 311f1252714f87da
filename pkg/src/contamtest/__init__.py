"""Minimax-robust binary hypothesis testing under label-noise contamination."""

from .errors import (
    ContamTestError,
    DegenerateRegionError,
    EmptyRegionError,
    FamilyError,
    InfeasibleParamsError,
    InvalidProportionsError,
    NoValidThresholdError,
    OrderingError,
    ScenarioError,
    SingularSystemError,
    SupportError,
)
from .minimax import MinimaxResult, inner_max, lp_bisection_oracle, minimax_search
from .mixprop import (
    NuStarQuartet,
    NuStarValue,
    nu_mixed_from_pure,
    reduced_from_nustars,
    nu_quartet,
    nu_star,
    recover_proportions,
    implied_pure_nustars,
)
from .models import (
    ContaminatedPair,
    ContaminationParams,
    Exponential,
    Gaussian,
    MixtureDensity,
    ReducedContamination,
    Tabulated,
    contaminate,
    expand_params,
    likelihood_ratio,
    reduce_params,
)
from .region import (
    FeasibleRegion,
    HalfPlane,
    PolygonVertex,
    add_constraints,
    base_region,
    build_region,
    cone_condition,
    cone_contains_nonpositive,
    enumerate_vertices,
)
from .risk import (
    BayesConfig,
    DecisionRegion,
    ErrorPair,
    RegionKind,
    RiskCoeffs,
    ThresholdRule,
    bayes_risk,
    contaminated_error_rates,
    decision_region,
    decontaminate,
    decontaminate_raw,
    decontaminated_rate_partials,
    gamma_from_lambda,
    lambda_from_gamma,
    pair_ratio_range,
    pure_error_rates,
    q_function,
    risk_coeffs,
    risk_gradient,
    threshold_rule_rates,
)
from .scenario import (
    ObserverRates,
    PreparedScenario,
    RunResult,
    ScenarioConfig,
    SimulationRates,
    emit_curves,
    load_scenario,
    parse_scenario,
    prepare_scenario,
    render_report,
    run_scenario,
)

__version__ = "0.1.0"
