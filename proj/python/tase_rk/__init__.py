from ._core import (
    ConfigError,
    IntegrationRun,
    NonFiniteState,
    Problem,
    TaseError,
    TaseOperator,
    boundary,
    fov,
    generalized_eigenvalues,
    in_diagram,
    integrate,
    kstar_real,
    make_problem,
    problem_names,
    real_axis_endpoints,
    rp,
    rt,
    rt_tilde,
    run_command,
    tase_weights,
)

__all__ = [
    "ConfigError",
    "IntegrationRun",
    "NonFiniteState",
    "Problem",
    "TaseError",
    "TaseOperator",
    "boundary",
    "fov",
    "generalized_eigenvalues",
    "in_diagram",
    "integrate",
    "kstar_real",
    "make_problem",
    "problem_names",
    "real_axis_endpoints",
    "rp",
    "rt",
    "rt_tilde",
    "run_command",
    "tase_weights",
]
