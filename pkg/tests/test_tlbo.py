import math

import numpy as np
import pytest

from chaos_target.baseline import random_search
from chaos_target.maps import ChaoticMap, State2
from chaos_target.problem import TargetingProblem, evaluate_batch, henon_problem, ushio_problem
from chaos_target.tlbo import (
    Population,
    TlboConfig,
    draw_partners,
    draw_teaching_weights,
    initialize_population,
    learning_candidates,
    learning_phase,
    make_rng,
    mean_learner,
    optimize,
    teaching_candidates,
    teaching_phase,
)


def pop_of(p, rows):
    x = np.array(rows, dtype=float)
    return Population(x, evaluate_batch(p, x))


def symmetric_problem(mu=0.01):
    # x(1) = (1 + u, 0), so the objective sqrt(u^2 + 0.05^2) is even in u
    return TargetingProblem(ChaoticMap.henon(), State2(0, 0), State2(1.0, 0.05), 1, mu, 0.02)


class TestConfig:
    @pytest.mark.parametrize("kw", [dict(population_size=1), dict(max_generations=0), dict(seed=-1), dict(seed=2**64)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            TlboConfig(**kw)


class TestInitialization:
    def test_bounds(self):
        p = henon_problem(horizon=1, mu=0.01)
        pop = initialize_population(p, TlboConfig(population_size=2), make_rng(3))
        assert pop.positions.shape == (2, 1)
        assert np.all(np.abs(pop.positions) <= 0.01)
        assert np.array_equal(pop.fitness, evaluate_batch(p, pop.positions))

    def test_same_seed_same_population(self):
        p = henon_problem(horizon=9)
        a = initialize_population(p, TlboConfig(), make_rng(11))
        b = initialize_population(p, TlboConfig(), make_rng(11))
        assert np.array_equal(a.positions, b.positions)
        assert np.array_equal(a.fitness, b.fitness)

    def test_uniform_mean(self):
        mu = 0.01
        p = henon_problem(horizon=9, mu=mu)
        cfg = TlboConfig(population_size=50)
        total = 0.0
        n_seeds = 10_000
        for s in range(n_seeds):
            total += initialize_population(p, cfg, make_rng(s)).positions.sum()
        n = n_seeds * 50 * 9
        se = mu / math.sqrt(3) / math.sqrt(n)
        assert abs(total / n) < 3 * se


class TestMeanLearner:
    @pytest.mark.parametrize(
        "rows, expected",
        [
            ([[0.01], [-0.01]], [0.0]),
            ([[0.003, -0.002]] * 4, [0.003, -0.002]),
            ([[0.002], [0.004], [0.006]], [0.004]),
        ],
    )
    def test_examples(self, rows, expected):
        pop = Population(np.array(rows), np.zeros(len(rows)))
        assert mean_learner(pop) == pytest.approx(expected, abs=1e-18)


class TestTeaching:
    def test_pinned_draws(self):
        v = teaching_candidates(np.array([[0.0]]), np.array([0.01]), np.array([0.0]), np.array([[0.5]]), np.array([[1]]))
        assert v.tolist() == [[0.005]]

    def test_degenerate_class_unchanged(self):
        p = henon_problem(horizon=3)
        pop = pop_of(p, [[0.002, -0.001, 0.004]] * 5)
        r = make_rng(0).random((5, 3))
        out = teaching_phase(pop, p, None, r=r, t=np.ones((5, 3), dtype=int))
        assert np.array_equal(out.positions, pop.positions)
        assert np.array_equal(out.fitness, pop.fitness)

    def test_tie_keeps_incumbent(self):
        p = symmetric_problem()
        pop = pop_of(p, [[0.004], [-0.004], [-0.004], [-0.004]])
        assert pop.best_index == 0
        # learner 1: -0.004 + 1 * (0.004 - 2 * -0.002) = 0.004, same objective
        out = teaching_phase(pop, p, None, r=np.ones((4, 1)), t=np.full((4, 1), 2))
        assert out.positions[1, 0] == -0.004

    def test_weights_support(self):
        r, t = draw_teaching_weights(make_rng(5), 200, 9)
        assert r.min() >= 0 and r.max() <= 1
        assert set(np.unique(t)) == {1, 2}
        assert abs(t.mean() - 1.5) < 0.05


class TestLearning:
    def test_better_learner_branch(self):
        w = learning_candidates(np.array([[0.002], [0.006]]), np.array([0.1, 0.3]), np.array([1, 0]), np.array([[0.5], [0.5]]))
        assert w[0, 0] == pytest.approx(0.0, abs=1e-18)
        # learner 1 is worse than learner 0, so it moves toward it
        assert w[1, 0] == pytest.approx(0.004, abs=1e-18)

    def test_identical_partner_no_move(self):
        p = henon_problem(horizon=2)
        pop = pop_of(p, [[0.001, 0.002], [0.001, 0.002]])
        out = learning_phase(pop, p, make_rng(1))
        assert np.array_equal(out.positions, pop.positions)

    def test_tie_keeps_incumbent(self):
        p = symmetric_problem()
        pop = pop_of(p, [[0.004], [-0.004]])
        out = learning_phase(pop, p, None, partners=[1, 0], rand=np.ones((2, 1)))
        assert out.positions.tolist() == pop.positions.tolist()

    def test_partners_exclude_self(self):
        rng = make_rng(2)
        counts = np.zeros((4, 4), dtype=int)
        for _ in range(4000):
            j = draw_partners(rng, 4)
            counts[np.arange(4), j] += 1
        assert np.all(np.diag(counts) == 0)
        off = counts[~np.eye(4, dtype=bool)]
        assert off.min() > 1150 and off.max() < 1520

    def test_needs_two_learners(self):
        p = henon_problem(horizon=1)
        with pytest.raises(ValueError):
            learning_phase(pop_of(p, [[0.0]]), p, make_rng(0))


class TestPhaseInvariants:
    def test_elitism_and_feasibility(self):
        rng = make_rng(2024)
        for trial in range(500):
            n = int(rng.integers(1, 12))
            mu = float(rng.choice([0.01, 0.03, 0.1]))
            p = (henon_problem if trial % 2 else ushio_problem)(horizon=n, mu=mu)
            pop = initialize_population(p, TlboConfig(population_size=int(rng.integers(2, 12))), rng)
            for phase in (teaching_phase, learning_phase):
                before = pop.fitness.copy()
                pop = phase(pop, p, rng)
                assert pop.fitness.min() <= before.min()
                assert np.all(pop.fitness <= before)
                assert np.all(np.abs(pop.positions) <= mu)
                assert np.array_equal(pop.fitness, evaluate_batch(p, pop.positions))


class TestOptimize:
    def test_fixed_point_start(self):
        # Jacobian 2-norm at the fixed point is ~2.05, so three steps with |u| <= 1e-12
        # end within (1 + 2.05 + 2.05^2) * 1e-12 < 1e-11 of it
        m = ChaoticMap.henon()
        fp = m.fixed_point()
        p = TargetingProblem(m, fp, fp, 3, 1e-12, 1e-10)
        rec = optimize(p, TlboConfig(population_size=10, max_generations=5, seed=9))
        assert rec.best_fitness_per_generation[0] < 1e-10
        assert rec.success_generation == 1

    def test_record_invariants(self):
        p = henon_problem(horizon=8, mu=0.01, epsilon=0.001)
        cfg = TlboConfig(population_size=20, max_generations=150, seed=4)
        rec = optimize(p, cfg)
        curve = rec.best_fitness_per_generation
        assert len(curve) == 150
        assert np.all(np.diff(curve) <= 0)
        assert rec.best_fitness == curve[-1]
        assert rec.evaluations_used == 20 + 2 * 20 * 150
        assert np.all(np.abs(rec.best_position) <= 0.01)
        hits = [g + 1 for g, v in enumerate(curve) if v < 0.001]
        assert rec.success_generation == (hits[0] if hits else None)

    def test_seed_determinism(self):
        p = ushio_problem(horizon=9, mu=0.05)
        cfg = TlboConfig(population_size=15, max_generations=60, seed=123)
        assert optimize(p, cfg) == optimize(p, cfg)
        assert optimize(p, cfg) != optimize(p, TlboConfig(15, 60, 124))

    def test_no_success(self):
        p = henon_problem(horizon=6, mu=0.01, epsilon=0.02)
        rec = optimize(p, TlboConfig(population_size=10, max_generations=20, seed=0))
        assert rec.success_generation is None

    def test_one_step_beats_grid_oracle(self):
        p = henon_problem(horizon=1, mu=0.01)
        # closed form: x(1) = (1 + u, 0); scan 1e5 evenly spaced u
        tx, ty = p.target
        grid = min(math.sqrt((1.0 + u - tx) ** 2 + ty**2) for u in np.linspace(-0.01, 0.01, 100_000))
        best = min(optimize(p, TlboConfig(10, 50, s)).best_fitness for s in range(20))
        assert best <= grid + 1e-6

    def test_beats_random_search_at_equal_budget(self):
        p = henon_problem(horizon=8, mu=0.01)
        cfg = TlboConfig(population_size=50, max_generations=100)
        tl, rs = [], []
        for s in range(30):
            rec = optimize(p, TlboConfig(50, 100, s))
            tl.append(rec.best_fitness)
            rs.append(random_search(p, rec.evaluations_used, s + 10_000))
        assert rec.evaluations_used == cfg.population_size * (1 + 2 * cfg.max_generations)
        assert np.mean(tl) <= np.mean(rs)
