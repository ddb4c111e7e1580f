import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import binom

from cig.misc.optimizers.newton import DampedNewtonOptimizer
from cig.misc.optimizers.scalar import SafeguardedNewtonOptimizer
from cig.misc.optimizers.secular import SecularRootFinder
from cig.misc.optimizers.vertex_exchange import VertexExchangeOptimizer


class TestDampedNewton:

    def test_quadratic_in_one_step(self):
        a = np.array([[3.0, 1.0], [1.0, 2.0]])
        b = np.array([1.0, -1.0])
        solver = DampedNewtonOptimizer()
        solver.setup(lambda x: (0.5 * x @ a @ x - b @ x, a @ x - b, a))
        result = solver.obtain_solution(np.zeros(2))
        assert_allclose(result.x, np.linalg.solve(a, b), atol=1e-12)
        assert result.iterations == 1
        assert result.diagnostics == []

    def test_log_sum_exp(self):
        # ψ(λ) - λμ for a Bernoulli: the minimiser is the logit of μ
        def objective(x):
            p = 1.0 / (1.0 + np.exp(-x[0]))
            return np.log1p(np.exp(x[0])) - 0.9 * x[0], np.array([p - 0.9]), np.array([[p * (1 - p)]])

        solver = DampedNewtonOptimizer(tol=1e-12)
        solver.setup(objective)
        assert_allclose(solver.obtain_solution([5.0]).x, [np.log(9.0)], atol=1e-10)

    def test_line_search_gives_up_after_thirty_halvings(self):
        calls = []

        def objective(x):
            calls.append(float(x[0]))
            value = 1.0 if x[0] == 1.0 else np.nan
            return value, np.array([1.0]), np.array([[1.0]])

        solver = DampedNewtonOptimizer()
        solver.setup(objective)
        result = solver.obtain_solution([1.0])
        assert len(calls) == 1 + 30
        assert result.diagnostics == ["line search stalled at iteration 1", "residual 1 above tolerance 1e-10"]

    def test_bad_tolerance(self):
        with pytest.raises(ValueError):
            DampedNewtonOptimizer(tol=0.0)


class TestSafeguardedNewton:

    def test_cubic(self):
        solver = SafeguardedNewtonOptimizer()
        solver.setup(lambda x: x ** 3 - 2.0, lambda x: 3 * x ** 2)
        assert_allclose(solver.obtain_solution(0.0).x, 2 ** (1 / 3.), atol=1e-10)

    def test_positive_bracket(self):
        solver = SafeguardedNewtonOptimizer()
        solver.setup(lambda x: np.log(x) + 5.0, lambda x: 1.0 / x)
        assert_allclose(solver.obtain_solution(1.0, positive=True).x, np.exp(-5.0), rtol=1e-8)

    def test_bad_derivative_falls_back_to_bisection(self):
        solver = SafeguardedNewtonOptimizer()
        solver.setup(lambda x: x - 0.3, lambda x: 0.0)
        assert_allclose(solver.obtain_solution(1.0).x, 0.3, atol=1e-10)

    def test_no_sign_change(self):
        solver = SafeguardedNewtonOptimizer(max_expansions=10)
        solver.setup(lambda x: x ** 2 + 1.0, lambda x: 2 * x)
        with pytest.raises(RuntimeError):
            solver.obtain_solution(0.5)


class TestSecularRootFinder:

    def _h(self, x, values, mults, pi0):
        return pi0 + x * np.sum(mults * values / (x - values))

    def test_roots_interlace_and_solve(self):
        values, mults, pi0 = np.array([0.4, 0.2, 0.1]), np.array([1.0, 2.0, 1.0]), 0.3
        solver = SecularRootFinder()
        solver.setup(values, mults, pi0)
        origins, deltas = solver.obtain_solution()
        roots = origins + deltas
        lower = np.append(values[1:], 0.0)
        assert np.all((roots > lower) & (roots < values))
        scale = [np.sum(np.abs(mults * values / (r - values))) for r in roots]
        for root, s in zip(roots, scale):
            assert abs(self._h(root, values, mults, pi0)) <= 1e-10 * s * max(root, 1.0)
        assert_allclose(solver.gaps(), roots[:, None] - values[None, :], atol=1e-14)

    def test_zero_pi0_gives_zero_root(self):
        solver = SecularRootFinder()
        solver.setup(np.array([0.5, 0.25]), np.array([1.0, 1.0]), 0.0)
        origins, deltas = solver.obtain_solution()
        assert origins[-1] + deltas[-1] == 0.0

    def test_poles_must_decrease(self):
        solver = SecularRootFinder()
        with pytest.raises(ValueError):
            solver.setup(np.array([0.1, 0.2]), np.ones(2), 0.5)
        with pytest.raises(ValueError):
            solver.setup(np.array([]), np.ones(0), 0.5)


class TestVertexExchange:

    def test_recovers_binomial_mixture_on_grid(self):
        grid = np.linspace(0.0, 1.0, 21)
        truth = 0.5 * binom.pmf(np.arange(6), 5, 0.2) + 0.5 * binom.pmf(np.arange(6), 5, 0.8)
        counts = 10000 * truth
        solver = VertexExchangeOptimizer(dd_tol=1e-8 * counts.sum())
        solver.setup(counts, lambda p: binom.pmf(np.arange(6), 5, p), grid)
        result = solver.obtain_solution(grid)
        assert result.converged
        assert_allclose(result.fitted, truth, atol=1e-6)
        assert np.all(np.diff(result.history) >= -1e-9 * np.abs(result.history[:-1]))
        assert result.diagnostics == []

    def test_polish_leaves_the_grid(self):
        counts = 1000 * binom.pmf(np.arange(4), 3, 0.33)
        solver = VertexExchangeOptimizer(dd_tol=1e-9 * counts.sum())
        solver.setup(counts, lambda p: binom.pmf(np.arange(4), 3, p), np.linspace(0.0, 1.0, 11), bounds=(0.0, 1.0))
        result = solver.obtain_solution([0.5])
        assert_allclose(np.sum(result.support * result.weights), 0.33, atol=1e-4)

    def test_bad_tolerance(self):
        with pytest.raises(ValueError):
            VertexExchangeOptimizer(dd_tol=0.0)
