"""Stochastic calculus via regularization: simulation and pathwise estimators.

Paths are numpy arrays with one row per grid node (and one column per mode
for vector paths). Regularization steps are given as multiples of dt.
"""

from ._core import (
    ConfigError,
    ConvergenceError,
    MildPath,
    RunConfig,
    TimeGrid,
    a_eps_statistic,
    covariation_eps,
    dual_graph_norm,
    forward_integral_eps,
    holder_exponent_estimate,
    ito_sum,
    load_config,
    ondrejat_check,
    parse_config,
    projective_norm,
    run_experiment,
    sample_brownian,
    sample_fbm,
    sample_q_wiener,
    scalar_qv_eps,
    simulate_heat,
    tensor_cov_eps,
    trace_pair,
    young_integral,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "MildPath",
    "RunConfig",
    "TimeGrid",
    "a_eps_statistic",
    "covariation_eps",
    "dual_graph_norm",
    "forward_integral_eps",
    "holder_exponent_estimate",
    "ito_sum",
    "load_config",
    "ondrejat_check",
    "parse_config",
    "projective_norm",
    "run_experiment",
    "sample_brownian",
    "sample_fbm",
    "sample_q_wiener",
    "scalar_qv_eps",
    "simulate_heat",
    "tensor_cov_eps",
    "trace_pair",
    "young_integral",
]
__version__ = "0.1.0"
