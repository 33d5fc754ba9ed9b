"""Reference searches used to sanity-check the optimizer."""
from __future__ import annotations

import numpy as np

from .problem import TargetingProblem, evaluate_batch
from .tlbo import make_rng


def random_search(p: TargetingProblem, n_evaluations: int, seed: int, chunk: int = 4096) -> float:
    """Best objective among uniform samples of the feasible box."""
    rng = make_rng(seed)
    best = np.inf
    left = n_evaluations
    while left > 0:
        m = min(chunk, left)
        u = rng.uniform(-p.mu, p.mu, size=(m, p.horizon))
        best = min(best, float(evaluate_batch(p, u).min()))
        left -= m
    return best


def grid_search_1d(p: TargetingProblem, n_points: int = 100_000) -> tuple[float, float]:
    """Exhaustive scan of u(0) for a one-step horizon; returns (u, objective)."""
    if p.horizon != 1:
        raise ValueError("grid search is only defined for horizon 1")
    u = np.linspace(-p.mu, p.mu, n_points)[:, None]
    f = evaluate_batch(p, u)
    i = int(np.argmin(f))
    return float(u[i, 0]), float(f[i])
