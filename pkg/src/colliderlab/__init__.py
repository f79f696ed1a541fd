"""colliderlab: a simulation laboratory for collider bias.

Audit DAG adjustment sets, generate data from linear-Gaussian structural
models, fit regressions from scratch, and quantify how conditioning on a
common effect distorts (and can flip) an estimated exposure effect.
"""

from . import errors, library
from .graph import (
    AdjustmentVerdict,
    Dag,
    Path,
    build_dag,
    check_adjustment_set,
    classify_node_on_path,
    d_separated,
    enumerate_paths,
    is_path_blocked,
)
from .montecarlo import (
    McSummary,
    Scenario,
    SweepRow,
    analytic_collider_coef,
    derive_seed,
    run_mc,
    run_sweep,
    sign_flip_boundary,
)
from .regression import (
    LogisticFit,
    OlsFit,
    PartialCurve,
    fit_logistic,
    fit_ols,
    forest_rows,
    partial_curve,
)
from .sem import (
    Assignment,
    ColumnSummary,
    CompiledSem,
    Dataset,
    ImpliedMoments,
    Indicator,
    Noise,
    Provenance,
    SemSpec,
    Term,
    compile_sem,
    describe,
    generate,
    generate_do,
    implied_moments,
    population_ols,
    spearman_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AdjustmentVerdict", "Assignment", "ColumnSummary", "CompiledSem", "Dag",
    "Dataset", "ImpliedMoments", "Indicator", "LogisticFit", "McSummary",
    "Noise", "OlsFit", "PartialCurve", "Path", "Provenance", "Scenario",
    "SemSpec", "SweepRow", "Term", "analytic_collider_coef", "build_dag",
    "check_adjustment_set", "classify_node_on_path", "compile_sem",
    "d_separated", "derive_seed", "describe", "enumerate_paths", "errors",
    "fit_logistic", "fit_ols", "forest_rows", "generate", "generate_do",
    "implied_moments", "is_path_blocked", "library", "partial_curve",
    "population_ols", "run_mc", "run_sweep", "sign_flip_boundary",
    "spearman_matrix",
]
