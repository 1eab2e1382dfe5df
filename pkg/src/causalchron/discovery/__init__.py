"""Structure-learning algorithms and the name-based learner registry."""

from __future__ import annotations

from typing import Callable

from ..bayesnet import Dag
from ..dataset import EventMatrix
from .citests import G2Result, ci_test_g2, fisher_exact
from .hc import hc_learn
from .lingam import lingam_learn
from .notears import (
    NotearsConvergenceError,
    WeightedAdjacency,
    acyclicity_h,
    notears_learn,
    threshold_to_dag,
)
from .pc import PcResult, pc_learn
from .stability import StabilityReport, default_lambda_grid, stability_select

__all__ = [
    "G2Result",
    "ci_test_g2",
    "fisher_exact",
    "hc_learn",
    "pc_learn",
    "PcResult",
    "lingam_learn",
    "notears_learn",
    "acyclicity_h",
    "threshold_to_dag",
    "WeightedAdjacency",
    "NotearsConvergenceError",
    "stability_select",
    "default_lambda_grid",
    "StabilityReport",
    "get_learner",
    "LEARNER_NAMES",
]

LEARNER_NAMES = ("hc", "pc", "lingam", "notears", "notears-stability")


def get_learner(name: str, **params: object) -> Callable[[EventMatrix, int], Dag]:
    """Uniform (data, seed) -> Dag handle for any named algorithm.

    Hyperparameters are bound at lookup time; seeds only matter for the
    algorithms that resample or restart.
    """
    if name == "hc":

        def run(data: EventMatrix, seed: int) -> Dag:
            return hc_learn(
                data,
                max_indegree=params.get("max_indegree"),
                seed=seed,
                restarts=int(params.get("restarts", 0)),
            )

    elif name == "pc":

        def run(data: EventMatrix, seed: int) -> Dag:
            return pc_learn(data, alpha=float(params.get("alpha", 0.05))).dag

    elif name == "lingam":

        def run(data: EventMatrix, seed: int) -> Dag:
            return lingam_learn(data, threshold=float(params.get("threshold", 0.1)))

    elif name == "notears":

        def run(data: EventMatrix, seed: int) -> Dag:
            _, dag = notears_learn(
                data,
                lambda1=float(params.get("lambda1", 0.1)),
                omega=float(params.get("omega", 0.3)),
                standardize=bool(params.get("standardize", False)),
            )
            return dag

    elif name == "notears-stability":

        def run(data: EventMatrix, seed: int) -> Dag:
            report = stability_select(
                data,
                lambda_grid=params.get("lambda_grid"),
                n_resamples=int(params.get("n_resamples", 50)),
                subsample_frac=float(params.get("subsample_frac", 0.8)),
                freq_threshold=float(params.get("freq_threshold", 0.6)),
                window=int(params.get("window", 3)),
                omega=float(params.get("omega", 0.3)),
                standardize=bool(params.get("standardize", False)),
                n_jobs=int(params.get("n_jobs", 1)),
                seed=seed,
            )
            return report.dag

    else:
        raise ValueError(f"unknown learner {name!r}; expected one of {LEARNER_NAMES}")
    run.__name__ = f"learner_{name.replace('-', '_')}"
    return run
