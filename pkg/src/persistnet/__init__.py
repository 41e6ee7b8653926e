"""Simulation and certification for consensus dynamics on directed graphs
whose arc weights vary with time.

The package answers three kinds of question about a network of agents that
repeatedly average their neighbors' values:

* structure: which arcs carry unbounded total influence (persistent) and
  which fade out (vanishing), and what the subgraph of persistent arcs
  looks like;
* simulation: exact discrete averaging runs and guaranteed-stochastic
  integration of the continuous flow;
* certification: computable contraction rates, agreement horizons, and
  disagreement floors, each verified against an actual trajectory.
"""

from .analysis import (
    AgreementHorizon,
    AgreementMetrics,
    BoundReport,
    CertificateDomainError,
    ContractionReport,
    EpsilonEstimate,
    FloorUnavailableError,
    LowerBoundCertificate,
    NotSummableError,
    RateCertificate,
    agreement_metrics,
    agreement_time_bound,
    block_extremes,
    continuous_disagreement_floor,
    continuous_rate_bound,
    detect_epsilon_agreement,
    discrete_disagreement_floor,
    discrete_rate_bound,
    find_window_violation,
    verify_contraction,
    verify_convexity_bound,
    verify_exponential_bound,
    verify_influence_bound,
    window_violation_threshold,
)
from .checks import (
    ROW_SUM_TOLERANCE,
    AssumptionParams,
    CheckResult,
    check_arc_balance,
    check_cut_balance,
    check_integral_arc_balance,
    check_self_confidence,
    check_stochasticity,
    check_window_bound,
    run_assumption_checks,
)
from .continuous import (
    MIN_STEP,
    ContinuousTrajectory,
    StepSizeUnderflow,
    derivative,
    integrate,
)
from .discrete import BeliefVector, RowSumViolation, Trajectory, simulate, step
from .graph import (
    Arc,
    Digraph,
    centers,
    diameter,
    is_quasi_strongly_connected,
    is_strongly_connected,
    reachable_set,
    shortest_path_lengths,
    subgraph_with_arcs,
)
from .scenarios import (
    CertSpec,
    CheckSpec,
    RunReport,
    Scenario,
    ScenarioError,
    ScenarioParseError,
    ScenarioValidationError,
    ZeroOneSplit,
    build_network,
    catalog,
    load_scenario,
    parse_scenario_dict,
    parse_weight,
    read_trajectory_csv,
    resolve_x0,
    run_and_write,
    run_scenario,
    save_scenario,
    scenario_to_dict,
    weight_to_spec,
    write_trajectory_csv,
)
from .weights import (
    Constant,
    ExponentialDecay,
    Mode,
    PeriodicPulse,
    Persistence,
    PersistenceReport,
    PowerDecay,
    StochasticComplement,
    Tabulated,
    TimeVaryingNetwork,
    UndeclaredPersistenceError,
    Weight,
    WeightSum,
    Zero,
    aggregate_vanishing_weight,
    classify_arc,
    inflow,
    persistence_report,
    persistent_inflow,
    stochastic_network,
    total_vanishing_weight,
)

__version__ = "0.1.0"

__all__ = [
    "AgreementHorizon",
    "AssumptionParams",
    "AgreementMetrics",
    "Arc",
    "BeliefVector",
    "BoundReport",
    "CertSpec",
    "CertificateDomainError",
    "CheckResult",
    "CheckSpec",
    "Constant",
    "ContinuousTrajectory",
    "ContractionReport",
    "Digraph",
    "EpsilonEstimate",
    "ExponentialDecay",
    "FloorUnavailableError",
    "LowerBoundCertificate",
    "MIN_STEP",
    "Mode",
    "NotSummableError",
    "PeriodicPulse",
    "Persistence",
    "PersistenceReport",
    "PowerDecay",
    "ROW_SUM_TOLERANCE",
    "RateCertificate",
    "RowSumViolation",
    "RunReport",
    "Scenario",
    "ScenarioError",
    "ScenarioParseError",
    "ScenarioValidationError",
    "StepSizeUnderflow",
    "StochasticComplement",
    "Tabulated",
    "TimeVaryingNetwork",
    "Trajectory",
    "UndeclaredPersistenceError",
    "Weight",
    "WeightSum",
    "Zero",
    "ZeroOneSplit",
    "agreement_metrics",
    "agreement_time_bound",
    "aggregate_vanishing_weight",
    "block_extremes",
    "build_network",
    "catalog",
    "centers",
    "check_arc_balance",
    "check_cut_balance",
    "check_integral_arc_balance",
    "check_self_confidence",
    "check_stochasticity",
    "check_window_bound",
    "classify_arc",
    "continuous_disagreement_floor",
    "continuous_rate_bound",
    "derivative",
    "detect_epsilon_agreement",
    "diameter",
    "discrete_disagreement_floor",
    "discrete_rate_bound",
    "find_window_violation",
    "inflow",
    "integrate",
    "is_quasi_strongly_connected",
    "is_strongly_connected",
    "load_scenario",
    "parse_scenario_dict",
    "parse_weight",
    "persistence_report",
    "persistent_inflow",
    "reachable_set",
    "run_assumption_checks",
    "read_trajectory_csv",
    "resolve_x0",
    "run_and_write",
    "run_scenario",
    "save_scenario",
    "scenario_to_dict",
    "shortest_path_lengths",
    "simulate",
    "step",
    "stochastic_network",
    "subgraph_with_arcs",
    "weight_to_spec",
    "total_vanishing_weight",
    "verify_contraction",
    "verify_convexity_bound",
    "verify_exponential_bound",
    "verify_influence_bound",
    "window_violation_threshold",
    "write_trajectory_csv",
]
