"""Continuous DAG learning by penalized least squares.

Minimizes (1/2n) ||X - XW||_F^2 + lambda ||W||_1 subject to the smooth
acyclicity constraint h(W) = tr(exp(W*W)) - d = 0, via an augmented
Lagrangian: the inner problem is solved by L-BFGS-B on the nonnegative
split W = W+ - W-, the dual variable is updated as alpha += rho * h, and
rho grows tenfold whenever h fails to shrink by a factor of four.  The
data matrix only enters through its Gram matrix, so inner iterations cost
O(d^3) regardless of sample size.

Columns are centered but deliberately not rescaled by default: the method
is not invariant to variable rescaling, so changing the scale changes the
answer.  A ``standardize`` flag exposes the alternative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from ..bayesnet import Dag
from ..dataset import EventMatrix

__all__ = [
    "WeightedAdjacency",
    "NotearsConvergenceError",
    "acyclicity_h",
    "notears_learn",
    "threshold_to_dag",
]


class NotearsConvergenceError(RuntimeError):
    """The augmented Lagrangian hit the penalty cap before h <= h_tol."""

    def __init__(self, h_final: float, rho: float):
        super().__init__(f"failed to reach acyclicity tolerance: h={h_final:.3e} at rho={rho:.1e}")
        self.h_final = h_final
        self.rho = rho


@dataclass(frozen=True, eq=False)
class WeightedAdjacency:
    """Real d x d matrix with zero diagonal; entry (i, j) weighs edge i -> j."""

    labels: tuple[str, ...]
    w: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.w, dtype=np.float64)
        d = len(self.labels)
        if w.shape != (d, d):
            raise ValueError("weight matrix must be square and match the labels")
        if not np.isfinite(w).all():
            raise ValueError("weight matrix must be finite")
        if np.abs(np.diag(w)).max(initial=0.0) > 0:
            raise ValueError("diagonal must be zero")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "w", w)


def acyclicity_h(w: np.ndarray) -> tuple[float, np.ndarray]:
    """Smooth acyclicity measure and its gradient.

    h(W) = tr(exp(W o W)) - d is zero exactly when the nonzero pattern of W
    is acyclic, and positive otherwise; the gradient is exp(W o W)^T o 2W.
    """
    w = np.asarray(w, dtype=np.float64)
    if not np.isfinite(w).all():
        raise ValueError("W must be finite")
    d = w.shape[0]
    e = scipy.linalg.expm(w * w)
    return float(np.trace(e) - d), e.T * (2.0 * w)


def threshold_to_dag(adj: WeightedAdjacency, omega: float) -> tuple[Dag, float]:
    """Zero entries below ``omega``; raise it further if cycles survive.

    Returns the DAG and the effective threshold actually used (the smallest
    value at or above ``omega`` whose surviving edges are acyclic).
    """
    w = adj.w.copy()
    w[np.abs(w) < omega] = 0.0
    effective = omega
    while True:
        edges = [
            (adj.labels[i], adj.labels[j])
            for i in range(w.shape[0])
            for j in range(w.shape[1])
            if w[i, j] != 0.0
        ]
        try:
            return Dag(adj.labels, edges), effective
        except ValueError:
            smallest = np.abs(w[w != 0.0]).min()
            effective = float(np.nextafter(smallest, np.inf))
            w[np.abs(w) <= smallest] = 0.0


def notears_learn(
    data: EventMatrix,
    lambda1: float = 0.1,
    omega: float = 0.3,
    standardize: bool = False,
    max_outer: int = 100,
    h_tol: float = 1e-8,
    rho_max: float = 1e16,
    progress_rate: float = 0.25,
    lbfgs_maxiter: int = 1000,
) -> tuple[WeightedAdjacency, Dag]:
    """Fit the weighted adjacency and threshold it into a DAG.

    Raises :class:`NotearsConvergenceError` (carrying the final h) when the
    penalty cap is reached first; converged runs always satisfy h <= h_tol.
    """
    if not data.is_complete:
        raise ValueError("notears requires complete data")
    x = data.values.astype(np.float64)
    if not np.isfinite(x).all():
        raise ValueError("data must be finite")
    x = x - x.mean(axis=0)
    if standardize:
        sd = x.std(axis=0)
        x = x / np.where(sd > 0, sd, 1.0)
    n, d = x.shape
    gram = x.T @ x / n
    diag_idx = np.arange(d)

    def unpack(vec: np.ndarray) -> np.ndarray:
        return (vec[: d * d] - vec[d * d :]).reshape(d, d)

    def objective(vec: np.ndarray, rho: float, alpha: float) -> tuple[float, np.ndarray]:
        w = unpack(vec)
        delta = w - np.eye(d)
        loss = 0.5 * float(np.trace(delta.T @ gram @ delta))
        g_loss = gram @ delta
        h, g_h = acyclicity_h(w)
        smooth = loss + 0.5 * rho * h * h + alpha * h
        g_smooth = g_loss + (rho * h + alpha) * g_h
        value = smooth + lambda1 * float(vec.sum())
        grad = np.concatenate([(g_smooth + lambda1).ravel(), (-g_smooth + lambda1).ravel()])
        return value, grad

    is_diag = np.eye(d, dtype=bool).ravel()
    bounds = [(0.0, 0.0) if flag else (0.0, None) for flag in np.tile(is_diag, 2)]
    vec = np.zeros(2 * d * d)
    rho, alpha, h_val = 1.0, 0.0, np.inf
    for _ in range(max_outer):
        while True:
            res = scipy.optimize.minimize(
                objective,
                vec,
                args=(rho, alpha),
                jac=True,
                method="L-BFGS-B",
                bounds=bounds,
                options={"maxiter": lbfgs_maxiter},
            )
            h_new, _ = acyclicity_h(unpack(res.x))
            if h_new > progress_rate * h_val and rho < rho_max:
                rho *= 10.0
            else:
                break
        vec = res.x
        h_val = h_new
        alpha += rho * h_val
        if h_val <= h_tol or rho >= rho_max:
            break
    if h_val > h_tol:
        raise NotearsConvergenceError(h_val, rho)
    w = unpack(vec)
    w[diag_idx, diag_idx] = 0.0
    adj = WeightedAdjacency(data.columns, w)
    dag, _ = threshold_to_dag(adj, omega)
    return adj, dag
