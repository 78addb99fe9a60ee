"""Two-arm Bayesian response-adaptive trial toolkit.

A dynamic linear model (Kalman) filter drives per-patient randomization
weights for a two-arm trial with a single uniform covariate; a
two-sample Bayesian t-test Bayes factor provides the decisive-stop
rule.  The package ships a Monte Carlo replication harness, a CLI, and
an event-sourced HTTP service for conducting a live trial.
"""

from .allocation import (AllocationWeight, Arm, ArmForecasts, Rule, assign,
                         design_vector, std_normal_cdf, weight, weight_eq5,
                         weight_eq6)
from .dlm import (Forecast, ModelSpec, PriorState, StateEstimate,
                  forecast_obs, predict_state, step, update)
from .engine import (PatientRecord, TrialConfig, TrialResult, TrialSession,
                     TrialStatus, count_switch_point, gen_covariate,
                     gen_outcome, run_trial, switch_point)
from .errors import (ConfigError, DegenerateData, DlmTrialError,
                     InsufficientData, NumericError)
from .harness import (AggregateResult, Scenario, aggregate, emit_report,
                      quantile, run_grid, run_scenario)
from .rng import CounterStream, derive_key, mix64
from .stopping import (BFPriors, TwoSampleSummary, bayes_factor_01,
                       is_decisive, t_density_ls, t_logdensity_ls,
                       two_sample_summary)

__version__ = "0.1.0"

__all__ = [
    "AllocationWeight", "Arm", "ArmForecasts", "Rule", "assign",
    "design_vector", "std_normal_cdf", "weight", "weight_eq5", "weight_eq6",
    "Forecast", "ModelSpec", "PriorState", "StateEstimate", "forecast_obs",
    "predict_state", "step", "update",
    "PatientRecord", "TrialConfig", "TrialResult", "TrialSession",
    "TrialStatus", "count_switch_point", "gen_covariate", "gen_outcome",
    "run_trial", "switch_point",
    "ConfigError", "DegenerateData", "DlmTrialError", "InsufficientData",
    "NumericError",
    "AggregateResult", "Scenario", "aggregate", "emit_report", "quantile",
    "run_grid", "run_scenario",
    "CounterStream", "derive_key", "mix64",
    "BFPriors", "TwoSampleSummary", "bayes_factor_01", "is_decisive",
    "t_density_ls", "t_logdensity_ls", "two_sample_summary",
    "__version__",
]
