"""Batch experiments: repeated independent runs, parameter sweeps, curves."""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .maps import ChaoticMap, NotReachedError, State2, iterate_uncontrolled
from .problem import TargetingProblem
from .seeding import run_seed
from .tlbo import RunRecord, TlboConfig, optimize

STD_CONVENTION = "population"


@dataclass(frozen=True)
class BatchStats:
    best: float
    worst: float
    mean: float
    std: float
    n_runs: int
    n_overflow: int = 0


@dataclass(frozen=True)
class SuccessMetrics:
    sr_percent: float
    aven: Optional[float]
    n_success: int


class BatchResult(NamedTuple):
    stats: BatchStats
    metrics: SuccessMetrics
    records: list


@dataclass(frozen=True)
class SweepRow:
    n_steps: int
    mu: float
    epsilon: float
    stats: Optional[BatchStats]
    metrics: Optional[SuccessMetrics]
    seed: int
    records: Optional[list] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class CurvePoint:
    generation: int
    mean_best_fitness: float


def batch_stats(values: Sequence[float]) -> BatchStats:
    """Best/worst/mean/population-std of final fitness; +inf runs are set aside."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("no runs to aggregate")
    finite = arr[np.isfinite(arr)]
    n_overflow = int(arr.size - finite.size)
    if finite.size == 0:
        inf = math.inf
        return BatchStats(inf, inf, inf, 0.0, int(arr.size), n_overflow)
    return BatchStats(
        best=float(finite.min()),
        worst=float(finite.max()),
        mean=float(finite.mean()),
        std=float(finite.std()),
        n_runs=int(arr.size),
        n_overflow=n_overflow,
    )


def success_metrics(records: Sequence[RunRecord]) -> SuccessMetrics:
    gens = [r.success_generation for r in records if r.success_generation is not None]
    n = len(records)
    if n == 0:
        raise ValueError("no runs to aggregate")
    aven = sum(gens) / len(gens) if gens else None
    return SuccessMetrics(100.0 * len(gens) / n, aven, len(gens))


def _run_one(args):
    problem, cfg = args
    return optimize(problem, cfg)


def _map_runs(tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves submission order, so aggregation is schedule-independent
        return list(pool.map(_run_one, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def run_seeds(p: TargetingProblem, n_runs: int, batch_seed: int) -> list[int]:
    return [run_seed(batch_seed, p.horizon, p.mu, p.epsilon, i) for i in range(n_runs)]


def run_batch(p: TargetingProblem, cfg: TlboConfig, n_runs: int, batch_seed: int, jobs: int = 1) -> BatchResult:
    """``n_runs`` independent optimizer runs; ``cfg.seed`` is replaced per run."""
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    tasks = [
        (p, TlboConfig(cfg.population_size, cfg.max_generations, s))
        for s in run_seeds(p, n_runs, batch_seed)
    ]
    records = _map_runs(tasks, jobs)
    stats = batch_stats([r.best_fitness for r in records])
    return BatchResult(stats, success_metrics(records), records)


def sweep(
    base: TargetingProblem,
    cfg: TlboConfig,
    n_values,
    mu_values,
    eps_values,
    n_runs: int,
    seed: int,
    jobs: int = 1,
    keep_records: bool = False,
) -> list[SweepRow]:
    """One batch per (N, mu, epsilon) cell, rows sorted ascending on each key.

    Run seeds depend only on the batch seed and the cell's own key, so
    adding or removing cells never changes another cell's numbers.
    """
    ns, mus, epss = sorted(set(n_values)), sorted(set(mu_values)), sorted(set(eps_values))
    if not (ns and mus and epss):
        raise ValueError("every sweep axis needs at least one value")
    rows = []
    for n, mu, eps in itertools.product(ns, mus, epss):
        try:
            p = base.with_params(horizon=n, mu=mu, epsilon=eps)
            res = run_batch(p, cfg, n_runs, seed, jobs)
        except (ValueError, ArithmeticError) as exc:
            rows.append(SweepRow(n, mu, eps, None, None, seed, error=f"{type(exc).__name__}: {exc}"))
            continue
        rows.append(SweepRow(n, mu, eps, res.stats, res.metrics, seed, res.records if keep_records else None))
    return rows


def mean_curve(records: Sequence[RunRecord]) -> list[CurvePoint]:
    if not records:
        raise ValueError("no records")
    lengths = {len(r.best_fitness_per_generation) for r in records}
    if len(lengths) != 1:
        raise ValueError(f"records have different generation counts: {sorted(lengths)}")
    curves = np.vstack([r.best_fitness_per_generation for r in records])
    means = curves.mean(axis=0)
    return [CurvePoint(g + 1, float(v)) for g, v in enumerate(means)]


def uncontrolled_baseline(
    chaotic_map: ChaoticMap,
    x0: State2,
    target: State2,
    eps_values: Sequence[float],
    max_iter: int,
) -> list[tuple[float, Optional[int]]]:
    """Iterations needed to hit each epsilon-ball without control; None if not reached."""
    rows = []
    for eps in eps_values:
        try:
            rows.append((eps, iterate_uncontrolled(chaotic_map, x0, target, eps, max_iter)))
        except NotReachedError:
            rows.append((eps, None))
    return rows
