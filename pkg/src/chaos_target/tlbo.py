"""Teaching-learning-based optimization over bounded control sequences.

The generation is synchronous: the teacher and the class mean are frozen
when the teaching phase starts, and partner fitness is read from the
snapshot taken when the learning phase starts. That makes every learner's
update independent of the others, so each phase is evaluated as one
vectorised batch.

Random draws per generation, in this order:
  teaching  R ~ U[0,1) of shape (NP, d), then T in {1, 2} of shape (NP, d)
  learning  partner offsets in [0, NP-2] of shape (NP,), then Rand of shape (NP, d)
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .problem import TargetingProblem, evaluate_batch


@dataclass(frozen=True)
class TlboConfig:
    population_size: int = 50
    max_generations: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass
class Population:
    positions: np.ndarray  # (NP, d), always inside the box
    fitness: np.ndarray  # (NP,), cached objective of each row

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    @property
    def best_index(self) -> int:
        # argmin returns the first minimum, so ties go to the lowest index
        return int(np.argmin(self.fitness))

    @property
    def best_fitness(self) -> float:
        return float(self.fitness[self.best_index])

    def copy(self) -> Population:
        return Population(self.positions.copy(), self.fitness.copy())


@dataclass
class RunRecord:
    best_position: np.ndarray
    best_fitness: float
    best_fitness_per_generation: np.ndarray
    evaluations_used: int
    success_generation: Optional[int] = None
    seed: Optional[int] = None

    def __eq__(self, other):
        if not isinstance(other, RunRecord):
            return NotImplemented
        return (
            np.array_equal(self.best_position, other.best_position)
            and self.best_fitness == other.best_fitness
            and np.array_equal(self.best_fitness_per_generation, other.best_fitness_per_generation)
            and self.evaluations_used == other.evaluations_used
            and self.success_generation == other.success_generation
            and self.seed == other.seed
        )


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def initialize_population(p: TargetingProblem, cfg: TlboConfig, rng: np.random.Generator) -> Population:
    positions = rng.uniform(-p.mu, p.mu, size=(cfg.population_size, p.horizon))
    return Population(positions, evaluate_batch(p, positions))


def mean_learner(pop: Population) -> np.ndarray:
    return pop.positions.mean(axis=0)


def teaching_candidates(positions, teacher, mean, r, t) -> np.ndarray:
    """V_i = R * (teacher - T * mean) + X_i, elementwise, one row per learner."""
    return r * (teacher - t * mean) + positions


def learning_candidates(positions, fitness, partners, rand) -> np.ndarray:
    """Move toward a better partner or away from a worse one."""
    other = positions[partners]
    better = (fitness < fitness[partners])[:, None]
    diff = np.where(better, positions - other, other - positions)
    return positions + rand * diff


def _select(pop: Population, cand: np.ndarray, cand_fit: np.ndarray) -> Population:
    # strict improvement only; ties keep the incumbent
    take = cand_fit < pop.fitness
    positions = np.where(take[:, None], cand, pop.positions)
    fitness = np.where(take, cand_fit, pop.fitness)
    return Population(positions, fitness)


def draw_teaching_weights(rng: np.random.Generator, n: int, d: int):
    r = rng.random((n, d))
    t = rng.integers(1, 3, size=(n, d))
    return r, t


def draw_partners(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform partner j != i for every learner i."""
    j = rng.integers(0, n - 1, size=n)
    return j + (j >= np.arange(n))


def teaching_phase(pop: Population, p: TargetingProblem, rng: np.random.Generator, r=None, t=None) -> Population:
    n, d = pop.positions.shape
    if r is None or t is None:
        r, t = draw_teaching_weights(rng, n, d)
    teacher = pop.positions[pop.best_index]
    cand = teaching_candidates(pop.positions, teacher, mean_learner(pop), r, t)
    cand = np.clip(cand, -p.mu, p.mu)
    return _select(pop, cand, evaluate_batch(p, cand))


def learning_phase(pop: Population, p: TargetingProblem, rng: np.random.Generator, partners=None, rand=None) -> Population:
    n, d = pop.positions.shape
    if n < 2:
        raise ValueError("learning phase needs at least two learners")
    if partners is None:
        partners = draw_partners(rng, n)
    if rand is None:
        rand = rng.random((n, d))
    cand = learning_candidates(pop.positions, pop.fitness, np.asarray(partners), rand)
    cand = np.clip(cand, -p.mu, p.mu)
    return _select(pop, cand, evaluate_batch(p, cand))


def optimize(p: TargetingProblem, cfg: TlboConfig) -> RunRecord:
    """Run the fixed generation budget and record the best fitness per generation."""
    rng = make_rng(cfg.seed)
    pop = initialize_population(p, cfg, rng)
    evals = cfg.population_size
    curve = np.empty(cfg.max_generations)
    for g in range(cfg.max_generations):
        pop = teaching_phase(pop, p, rng)
        pop = learning_phase(pop, p, rng)
        evals += 2 * cfg.population_size
        curve[g] = pop.fitness.min()

    hits = np.flatnonzero(curve < p.epsilon)
    best = pop.best_index
    return RunRecord(
        best_position=pop.positions[best].copy(),
        best_fitness=float(pop.fitness[best]),
        best_fitness_per_generation=curve,
        evaluations_used=evals,
        success_generation=int(hits[0]) + 1 if hits.size else None,
        seed=cfg.seed,
    )
