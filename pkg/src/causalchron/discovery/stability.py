"""Two-level stability selection for the continuous learner.

Runs the penalized least-squares learner over a grid of regularization
strengths and repeated subsamples, then keeps the directed edges that are
selected frequently across a contiguous stretch of the grid.  The densest
end of the grid (smallest lambda) and any grid points whose average graph
is empty are excluded before looking for qualifying windows, so neither
overly dense nor vacuous configurations can certify an edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._rng import spawn_seed
from ..bayesnet import Dag
from ..dataset import EventMatrix
from .notears import NotearsConvergenceError, notears_learn

__all__ = ["StabilityReport", "default_lambda_grid", "stability_select"]


def default_lambda_grid(start: float = 1e-3, stop: float = 1.0, num: int = 16) -> tuple[float, ...]:
    return tuple(float(v) for v in np.logspace(np.log10(start), np.log10(stop), num))


@dataclass(frozen=True)
class StabilityReport:
    lambda_grid: tuple[float, ...]
    edge_frequencies: dict[tuple[str, str], tuple[float, ...]]
    stable_edges: frozenset[tuple[str, str]]
    dag: Dag
    failures: int
    valid_lambda_indices: tuple[int, ...]

    def to_json_doc(self) -> dict:
        return {
            "lambda_grid": list(self.lambda_grid),
            "edge_frequencies": [
                {"parent": p, "child": c, "frequencies": list(freqs)}
                for (p, c), freqs in sorted(self.edge_frequencies.items())
            ],
            "stable_edges": sorted(list(e) for e in self.stable_edges),
            "failures": self.failures,
            "valid_lambda_indices": list(self.valid_lambda_indices),
        }


def stability_select(
    data: EventMatrix,
    lambda_grid: tuple[float, ...] | None = None,
    n_resamples: int = 50,
    subsample_frac: float = 0.8,
    freq_threshold: float = 0.6,
    window: int = 3,
    seed: int = 0,
    omega: float = 0.3,
    standardize: bool = False,
    n_jobs: int = 1,
) -> StabilityReport:
    """Edge selection frequencies across (lambda, subsample) fits.

    An edge is stable when its selection frequency is at least
    ``freq_threshold`` at every point of some run of ``window`` contiguous
    valid grid points.  A degenerate single-point grid skips the dense-end
    exclusion so the procedure collapses to a plain thresholded fit.
    Solver failures are counted per cell and never abort the scan.

    The (lambda, resample) cells are independent; ``n_jobs`` > 1 runs them
    on a thread pool, and results reduce by cell index, so the report is
    identical whatever the scheduling.
    """
    grid = tuple(lambda_grid) if lambda_grid is not None else default_lambda_grid()
    if any(l <= 0 for l in grid) or list(grid) != sorted(grid):
        raise ValueError("lambda grid must be positive and ascending")
    if not data.is_complete:
        raise ValueError("stability selection requires complete data")
    n = data.n_rows
    size = int(np.ceil(subsample_frac * n))
    labels = data.columns
    pairs = [(p, c) for p in labels for c in labels if p != c]
    counts = {pair: np.zeros(len(grid)) for pair in pairs}
    attempts = np.zeros(len(grid))
    edge_totals = np.zeros(len(grid))
    failures = 0

    def fit_cell(li: int, ri: int) -> Dag | None:
        rng = np.random.default_rng(spawn_seed(seed, "stability", li, ri))
        rows = rng.choice(n, size=size, replace=False)
        sub = EventMatrix(labels, data.values[np.sort(rows)], provenance="subsample")
        try:
            _, dag = notears_learn(sub, lambda1=grid[li], omega=omega, standardize=standardize)
            return dag
        except NotearsConvergenceError:
            return None

    cells = [(li, ri) for li in range(len(grid)) for ri in range(n_resamples)]
    if n_jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(lambda cell: fit_cell(*cell), cells))
    else:
        results = [fit_cell(*cell) for cell in cells]
    for (li, ri), dag in zip(cells, results):
        if dag is None:
            failures += 1
            continue
        attempts[li] += 1
        edge_totals[li] += len(dag.edges)
        for e in dag.edges:
            counts[e][li] += 1

    with np.errstate(invalid="ignore"):
        freq_matrix = {
            pair: np.where(attempts > 0, cnt / np.maximum(attempts, 1), 0.0)
            for pair, cnt in counts.items()
        }
    mean_edges = np.where(attempts > 0, edge_totals / np.maximum(attempts, 1), 0.0)
    valid = [
        i
        for i in range(len(grid))
        if (i > 0 or len(grid) == 1) and mean_edges[i] > 0 and attempts[i] > 0
    ]
    eff_window = min(window, len(valid)) if valid else window

    stable: set[tuple[str, str]] = set()
    valid_set = set(valid)
    for pair in pairs:
        freqs = freq_matrix[pair]
        run = 0
        for i in range(len(grid)):
            if i in valid_set and freqs[i] >= freq_threshold:
                run += 1
                if run >= eff_window:
                    stable.add(pair)
                    break
            else:
                run = 0

    # assemble; on cycles drop the weakest edges (by peak frequency) first
    def peak(pair: tuple[str, str]) -> float:
        freqs = freq_matrix[pair]
        return max((freqs[i] for i in valid), default=0.0)

    kept = sorted(stable)
    while True:
        try:
            dag = Dag(labels, kept)
            break
        except ValueError:
            kept.remove(min(kept, key=lambda e: (peak(e), e)))
    return StabilityReport(
        lambda_grid=grid,
        edge_frequencies={pair: tuple(freq_matrix[pair]) for pair in pairs},
        stable_edges=frozenset(stable),
        dag=dag,
        failures=failures,
        valid_lambda_indices=tuple(valid),
    )
