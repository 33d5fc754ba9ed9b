"""Bounded-perturbation targeting problem.

A control sequence ``u`` of length N is added to the first state
component at every step; the objective is the Euclidean distance between
the state after N steps and the target.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .maps import ChaoticMap, MapOverflowError, State2


class EvaluationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class TargetingProblem:
    map: ChaoticMap
    x0: State2
    target: State2
    horizon: int
    mu: float
    epsilon: float

    def __post_init__(self):
        object.__setattr__(self, "x0", State2(float(self.x0[0]), float(self.x0[1])))
        object.__setattr__(self, "target", State2(float(self.target[0]), float(self.target[1])))
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise ValueError(f"horizon must be an integer >= 1, got {self.horizon!r}")
        object.__setattr__(self, "horizon", int(self.horizon))
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise ValueError(f"mu must be a positive finite real, got {self.mu!r}")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"epsilon must be a positive finite real, got {self.epsilon!r}")
        if not all(math.isfinite(v) for v in (*self.x0, *self.target)):
            raise ValueError("x0 and target must be finite")

    def with_params(self, horizon=None, mu=None, epsilon=None) -> TargetingProblem:
        return TargetingProblem(
            self.map,
            self.x0,
            self.target,
            self.horizon if horizon is None else horizon,
            self.mu if mu is None else mu,
            self.epsilon if epsilon is None else epsilon,
        )


def henon_problem(horizon: int = 8, mu: float = 0.01, epsilon: float = 0.02) -> TargetingProblem:
    """Classical Hénon setup: from the origin to the positive fixed point."""
    m = ChaoticMap.henon()
    return TargetingProblem(m, State2(0.0, 0.0), m.fixed_point(), horizon, mu, epsilon)


def ushio_problem(horizon: int = 8, mu: float = 0.05, epsilon: float = 0.02) -> TargetingProblem:
    """Ushio setup: from (0.6, -0.3) to the origin."""
    return TargetingProblem(ChaoticMap.ushio(), State2(0.6, -0.3), State2(0.0, 0.0), horizon, mu, epsilon)


def clamp_to_bounds(u, mu: float) -> np.ndarray:
    """Project onto the closed box [-mu, mu] elementwise."""
    u = np.asarray(u, dtype=np.float64)
    if np.isnan(u).any():
        raise ValueError("control sequence contains NaN")
    return np.clip(u, -mu, mu)


def _check_shape(p: TargetingProblem, u: np.ndarray) -> None:
    if u.shape[-1] != p.horizon:
        raise ValueError(f"control sequence length {u.shape[-1]} != horizon {p.horizon}")


def controlled_trajectory(p: TargetingProblem, u) -> np.ndarray:
    """States x(0..N) as an (N+1, 2) array; overflow raises MapOverflowError."""
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1:
        raise ValueError("control sequence must be one-dimensional")
    _check_shape(p, u)
    out = np.empty((p.horizon + 1, 2))
    x1, x2 = p.x0
    out[0] = x1, x2
    for k in range(p.horizon):
        f1, x2 = p.map.step_xy(x1, x2)
        x1 = f1 + float(u[k])
        if not (math.isfinite(x1) and math.isfinite(x2)):
            raise MapOverflowError(f"trajectory escaped at step {k + 1}")
        out[k + 1] = x1, x2
    return out


def evaluate_batch(p: TargetingProblem, us) -> np.ndarray:
    """Objective for every row of an (M, N) array; overflowing rows get +inf.

    Arithmetic is elementwise and identical to :func:`controlled_trajectory`,
    so each entry equals the scalar evaluation bit for bit.
    """
    us = np.asarray(us, dtype=np.float64)
    if us.ndim != 2:
        raise ValueError("expected a 2-D array of control sequences")
    _check_shape(p, us)
    m = us.shape[0]
    x1 = np.full(m, p.x0.x1)
    x2 = np.full(m, p.x0.x2)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(p.horizon):
            f1, x2 = p.map.step_xy(x1, x2)
            x1 = f1 + us[:, k]
        dx = x1 - p.target.x1
        dy = x2 - p.target.x2
        d = np.sqrt(dx * dx + dy * dy)
    d[~np.isfinite(d)] = np.inf
    return d


def evaluate(p: TargetingProblem, u) -> float:
    """Distance from x(N) to the target; raises EvaluationError on overflow."""
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1:
        raise ValueError("control sequence must be one-dimensional")
    try:
        xn = controlled_trajectory(p, u)[-1]
    except MapOverflowError as exc:
        raise EvaluationError(str(exc)) from exc
    dx = float(xn[0]) - p.target.x1
    dy = float(xn[1]) - p.target.x2
    return math.sqrt(dx * dx + dy * dy)


def is_success(value: float, epsilon: float) -> bool:
    return value < epsilon
