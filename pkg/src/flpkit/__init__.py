"""Fuzzy linear programming with logistic S-curve membership functions."""
from ._backend import backend_name
from .flp import (
    ComparisonRow,
    DegenerateGoalError,
    FuzzyCoeff,
    FuzzyLinearProgram,
    FuzzyRow,
    InfeasibleModelError,
    SatisfactionResult,
    SweepRecord,
    SweepResult,
    compare_methods,
    default_alpha_grid,
    defuzzify_at,
    max_satisfaction_solve,
    sweep,
)
from .lp_core import (
    ConstraintRow,
    LinearProgram,
    ModelError,
    OracleError,
    RowCheck,
    Solution,
    SolverError,
    brute_force_optimum,
    check_feasible,
    evaluate_objective,
    solve,
)
from .membership import MembershipRangeError, ParameterError, SCurve, inverse, mu, valid_range
from .model_io import (
    ModelParseError,
    ModelSource,
    ParseDiagnostic,
    bundled_model_path,
    emit_solution_report,
    emit_sweep_csv,
    format_model,
    load_model,
    parse_model,
    read_sweep_csv,
)

__version__ = "0.1.0"
