"""Randomized Kaczmarz-family solvers for linear systems in factored form.

The package solves U @ V @ b = y without ever forming the product
U @ V: interlaced methods advance the inner variable x = V b on the
(U, y) subsystem and the solution iterate b on the (V, x) subsystem in
alternation.  Alongside the interlaced pairings it ships the four
single-system baselines (rk, rek, rgs, regs), a pseudo-inverse oracle,
scenario generators, expected-error bound curves, and a benchmark CLI.
"""
from .dense import (
    DenseMatrix,
    axpy,
    dot,
    load_matrix,
    load_vector,
    make_matrix,
    make_vector,
    matvec,
    matvec_adjoint,
    save_matrix,
    save_vector,
)
from .sampling import NormSampler, master_rng, sampler_from_cols, sampler_from_rows, trial_rng
from .oracle import (
    RateConstants,
    SvdFactors,
    factored_full_solution,
    pinv_solve,
    projector_rowspace,
    rate_constants,
    svd,
)
from .solvers import (
    METHODS,
    SolverState,
    estimate,
    init_state,
    regs_step,
    rek_step,
    rgs_step,
    rk_step,
    run,
)
from .interlaced import (
    PAIRINGS,
    BoundInputs,
    FactoredSystem,
    InterlacedState,
    bound_inputs,
    expected_error_bound,
    init_interlaced,
    interlaced_step,
    run_interlaced,
)
from .systems import (
    SCENARIO_PRESETS,
    SCENARIOS,
    GeneratedInstance,
    ScenarioSpec,
    gen_gaussian_factored,
    load_factored,
    load_instance,
    make_inconsistent_rhs,
    save_instance,
)
from .bench import RunConfig, Trajectory, emit_csv, emit_summary_csv, run_experiment, write_run_manifest

__version__ = "0.1.0"

__all__ = [
    "DenseMatrix",
    "make_matrix",
    "make_vector",
    "matvec",
    "matvec_adjoint",
    "dot",
    "axpy",
    "save_matrix",
    "load_matrix",
    "save_vector",
    "load_vector",
    "NormSampler",
    "sampler_from_rows",
    "sampler_from_cols",
    "master_rng",
    "trial_rng",
    "SvdFactors",
    "RateConstants",
    "svd",
    "pinv_solve",
    "rate_constants",
    "projector_rowspace",
    "factored_full_solution",
    "METHODS",
    "SolverState",
    "init_state",
    "estimate",
    "rk_step",
    "rek_step",
    "rgs_step",
    "regs_step",
    "run",
    "PAIRINGS",
    "FactoredSystem",
    "InterlacedState",
    "init_interlaced",
    "interlaced_step",
    "run_interlaced",
    "BoundInputs",
    "bound_inputs",
    "expected_error_bound",
    "SCENARIOS",
    "SCENARIO_PRESETS",
    "ScenarioSpec",
    "GeneratedInstance",
    "gen_gaussian_factored",
    "make_inconsistent_rhs",
    "save_instance",
    "load_instance",
    "load_factored",
    "RunConfig",
    "Trajectory",
    "run_experiment",
    "emit_csv",
    "emit_summary_csv",
    "write_run_manifest",
    "__version__",
]
