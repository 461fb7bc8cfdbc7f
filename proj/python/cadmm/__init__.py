"""Consensus splitting solver for general complex QCQPs.

The heavy lifting lives in the compiled extension; this package re-exports it
and adds a keyword-friendly solve().
"""

from cadmm._core import (  # noqa: F401
    AdmmEngine,
    CEstimate,
    CMode,
    EigDecomposition,
    FeasibilityReport,
    InfeasibleSubproblemError,
    IoError,
    IterateState,
    MonotonicityReport,
    NotPositiveDefiniteError,
    ParameterError,
    PilotResult,
    QcqpConstraint,
    QcqpInstance,
    RunResult,
    SolverConfig,
    StopMode,
    TerminationReason,
    TraceRecord,
    TRACE_COLUMNS,
    ValidationError,
    audit_monotonicity,
    augmented_lagrangian,
    check_feasible,
    constraint_value,
    dual_identity_residual,
    eig_hermitian,
    estimate_c,
    expand_equality,
    generate,
    instance_from_json,
    load_instance,
    make_instance,
    objective,
    pilot_rho,
    project_qcqp1,
    quad_form,
    read_trace_csv,
    recommend_rho,
    save_instance,
    solve_shifted_pd,
    strong_convexity_floor,
    strong_convexity_param,
    summary_json,
    write_trace_csv,
)
from cadmm import _core

__version__ = "0.1.0"


def solve(instance, x0=None, **config):
    """Run the solver with SolverConfig fields given as keyword arguments.

    >>> result = solve(generate(n=10, m=5, pd_a0=True, seed=1), rho=10.0,
    ...                max_iters=1000)
    """
    cfg = SolverConfig()
    for key, value in config.items():
        if not hasattr(cfg, key):
            raise TypeError(f"unknown solver option {key!r}")
        setattr(cfg, key, value)
    return _core.solve(instance, cfg, x0)
