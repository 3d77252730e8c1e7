import numpy as np

from peersplit import (
    Objective,
    SolverConfig,
    WeightMatrix,
    aaip_exact,
    build_residual_objective,
    differential_evolution,
    nelder_mead,
    nelder_mead_multistart,
    simulated_annealing,
)
from oracles import random_weight_matrix


def sphere_objective(bound=5.0):
    return Objective(2, lambda x: float((x**2).sum()), np.full(2, -bound), np.full(2, bound))


def rosenbrock_objective():
    def rosen(x):
        return float((1 - x[0]) ** 2 + 100.0 * (x[1] - x[0] ** 2) ** 2)

    return Objective(2, rosen, np.full(2, -5.0), np.full(2, 5.0))


def rastrigin_objective():
    def rastrigin(x):
        return float(20.0 + (x**2 - 10.0 * np.cos(2 * np.pi * x)).sum())

    return Objective(2, rastrigin, np.full(2, -5.12), np.full(2, 5.12))


W_HAND = WeightMatrix(np.array([[0.5, 0.7], [0.5, 0.3]]))


class TestResidualObjective:
    def test_unanimity_zero_at_log_weights(self):
        v = np.array([0.2, 0.3, 0.5])
        w = WeightMatrix(np.repeat(v[:, None], 3, axis=1))
        obj = build_residual_objective(w, "gaip")
        assert obj.evaluate(np.log(v)) < 1e-28
        assert obj.dimension == 3
        assert (obj.lower == -12.0).all() and (obj.upper == 12.0).all()

    def test_origin_is_uniform_priorities_at_unit_scale(self):
        from peersplit import residual_g

        rng = np.random.default_rng(0)
        w = WeightMatrix(random_weight_matrix(rng, 3))
        obj = build_residual_objective(w, "gaip")
        assert obj.evaluate(np.zeros(3)) == residual_g(w, np.ones(3))

    def test_additive_zero_at_exact_solution(self):
        obj = build_residual_objective(W_HAND, "aaip")
        z = np.log(aaip_exact(W_HAND).values)
        assert obj.evaluate(z) < 1e-28


class TestNelderMead:
    def test_sphere(self):
        result = nelder_mead(sphere_objective(), [1.0, 1.0], SolverConfig())
        assert result.value < 1e-10
        assert np.abs(result.x).max() < 1e-6

    def test_rosenbrock(self):
        result = nelder_mead(rosenbrock_objective(), [-1.2, 1.0], SolverConfig())
        assert result.value < 1e-8
        assert np.abs(result.x - 1.0).max() < 1e-4

    def test_additive_residual_multistart(self):
        obj = build_residual_objective(W_HAND, "aaip")
        best = min(nelder_mead_multistart(obj, SolverConfig()), key=lambda r: r.value)
        assert best.value < 1e-12
        y = np.exp(best.x)
        assert np.abs(y / y.sum() - [7 / 12, 5 / 12]).max() < 1e-6

    def test_budget_exhaustion_flagged(self):
        result = nelder_mead(rosenbrock_objective(), [-1.2, 1.0], SolverConfig(nm_max_evals=25))
        assert result.budget_exhausted
        assert result.evaluations == 25


class TestDifferentialEvolution:
    def test_sphere_with_defaults(self):
        result = differential_evolution(sphere_objective(), SolverConfig())
        assert result.value < 1e-8

    def test_rastrigin_seeded(self):
        cfg = SolverConfig(seed=0, de_generations=400, de_stagnation=400)
        result = differential_evolution(rastrigin_objective(), cfg)
        assert result.value < 1e-4

    def test_unanimity_residual(self):
        v = np.array([0.4, 0.6])
        w = WeightMatrix(np.column_stack([v, v]))
        result = differential_evolution(build_residual_objective(w, "gaip"), SolverConfig())
        assert result.value < 1e-12


class TestSimulatedAnnealing:
    def test_sphere(self):
        result = simulated_annealing(sphere_objective(), SolverConfig())
        assert result.value < 1e-6

    def test_additive_residual(self):
        result = simulated_annealing(build_residual_objective(W_HAND, "aaip"), SolverConfig())
        assert result.value < 1e-8

    def test_constant_objective(self):
        obj = Objective(2, lambda x: 3.0, np.full(2, -1.0), np.full(2, 1.0))
        result = simulated_annealing(obj, SolverConfig())
        assert result.value == 3.0


class TestOptimizerInvariants:
    def _all_results(self, obj, cfg):
        return [
            nelder_mead(obj, (obj.lower + obj.upper) / 2, cfg),
            differential_evolution(obj, cfg),
            simulated_annealing(obj, cfg),
        ]

    def test_within_bounds(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            w = WeightMatrix(random_weight_matrix(rng, 3))
            obj = build_residual_objective(w, "gaip")
            for result in self._all_results(obj, SolverConfig(seed=int(rng.integers(100)))):
                assert (result.x >= obj.lower).all() and (result.x <= obj.upper).all()

    def test_reported_value_matches_reevaluation(self):
        rng = np.random.default_rng(2)
        w = WeightMatrix(random_weight_matrix(rng, 4))
        obj = build_residual_objective(w, "aaip")
        for result in self._all_results(obj, SolverConfig(seed=3)):
            assert obj.evaluate(result.x) == result.value

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(3)
        w = WeightMatrix(random_weight_matrix(rng, 3))
        obj = build_residual_objective(w, "gaip")
        cfg = SolverConfig(seed=11)
        for solver in (
            lambda: min(nelder_mead_multistart(obj, cfg), key=lambda r: r.value),
            lambda: differential_evolution(obj, cfg),
            lambda: simulated_annealing(obj, cfg),
        ):
            first, second = solver(), solver()
            assert first.value == second.value
            assert np.array_equal(first.x, second.x)
            assert first.evaluations == second.evaluations

    def test_best_so_far_history_is_monotone(self):
        rng = np.random.default_rng(4)
        w = WeightMatrix(random_weight_matrix(rng, 4))
        obj = build_residual_objective(w, "gaip")
        for result in self._all_results(obj, SolverConfig(seed=5)):
            history = np.array(result.history)
            assert (np.diff(history) <= 0).all()
