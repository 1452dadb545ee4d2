"""
Experiment registry.
Each experiment takes typed parameters, a report writer and the run seed,
writes its CSVs and returns the summary scalars for the manifest.
"""
from typing import Any, Callable

from ..analysis.reporter import ReportWriter
from ..core.config import ExperimentParams


Summary = dict[str, Any]
ExperimentFn = Callable[[ExperimentParams, ReportWriter, int], Summary]

EXPERIMENT_REGISTRY: dict[str, ExperimentFn] = {}


def experiment(name: str) -> Callable[[ExperimentFn], ExperimentFn]:
    """Register an experiment body under its CLI name."""
    def register(fn: ExperimentFn) -> ExperimentFn:
        EXPERIMENT_REGISTRY[name] = fn
        return fn
    return register


# CSV headers
EXPAND_EVAL_HEADER = ("x", "value", "d_dx", "d2_dx2")
REMAINDER_AUDIT_HEADER = ("x", "closed_form", "quadrature", "abs_diff")
FIT_REPORT_HEADER = ("a1", "a2", "a3", "rmse", "max_abs_err", "n_samples", "converged")
RESIDUAL_REPORT_HEADER = ("x", "t", "residual")
MC_REPORT_HEADER = ("policy", "n_paths", "n_steps", "seed", "mean_utility", "std_err", "bankrupt_paths")
CONVERGENCE_HEADER = ("level", "n_x", "n_t", "max_abs_diff", "observed_order")
