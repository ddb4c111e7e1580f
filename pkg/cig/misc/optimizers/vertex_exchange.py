from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
from dotmap import DotMap
from scipy.linalg import null_space
from scipy.optimize import brentq, minimize_scalar

from cig.misc import logger

from .optimizer import Optimizer


class VertexExchangeOptimizer(Optimizer):
    """Maximises ℓ(w) = Σ_i n_i log(Σ_j w_j π_i(θ_j)) over mixing distributions on a
    continuous parameter interval.

    Each outer iteration adds the θ with the largest directional derivative
    D(θ) = Σ_i n_i π_i(θ)/π̂_i - N (audit grid, then a bounded Brent polish), moves weight
    onto it by an exact line search, and re-optimises all weights: multiplicative EM updates
    followed by Newton steps on the active set within the null space of 1ᵀ. No accepted
    step decreases ℓ.
    """

    def __init__(self, dd_tol, prune_tol=1e-8, max_iters=500, em_steps=25, newton_steps=50, polish=True):
        """Creates an instance of this class.

        Arguments:
            dd_tol (float): stop once max_θ D(θ) ≤ dd_tol.
            prune_tol (float): support points whose weight falls below this are dropped.
            max_iters (int): maximum number of added support points.
            em_steps (int): multiplicative updates before the Newton phase.
            newton_steps (int): maximum Newton steps per corrective phase.
            polish (bool): refine the best audit-grid point by a bounded 1-d search.
        """
        super(VertexExchangeOptimizer, self).__init__()
        if dd_tol <= 0:
            raise ValueError("Directional derivative tolerance must be positive.")
        self.dd_tol, self.prune_tol, self.max_iters = dd_tol, prune_tol, max_iters
        self.em_steps, self.newton_steps, self.polish = em_steps, newton_steps, polish
        self.counts, self.component, self.audit_grid, self.bounds = None, None, None, None

    def setup(self, counts, component, audit_grid, bounds=None):
        """Arguments:
            counts (np.ndarray): counts on the bins the likelihood sees.
            component (func): θ -> probabilities of those bins.
            audit_grid (np.ndarray): increasing θ values searched for the largest D(θ).
            bounds (tuple): (optional) parameter interval; when omitted only the audit grid
                is searched.
        """
        self.counts = np.asarray(counts, dtype=float)
        self.component = component
        self.audit_grid = np.asarray(audit_grid, dtype=float)
        self.bounds = bounds
        self._audit_matrix = self._matrix(self.audit_grid)
        self.reset()

    def _matrix(self, thetas):
        return np.column_stack([self.component(theta) for theta in thetas])

    def loglik(self, fitted):
        observed = self.counts > 0
        with np.errstate(divide='ignore'):
            return float(np.sum(self.counts[observed] * np.log(fitted[observed])))

    def _ratio(self, fitted):
        return np.divide(self.counts, fitted, out=np.zeros_like(self.counts), where=self.counts > 0)

    def directional_derivatives(self, fitted, matrix):
        return self._ratio(fitted) @ matrix - self.counts.sum()

    def _em(self, matrix, weights):
        total = self.counts.sum()
        for _ in range(self.em_steps):
            weights = weights * (self._ratio(matrix @ weights) @ matrix) / total
            weights /= weights.sum()
        return weights

    def _newton(self, matrix, weights):
        total = self.counts.sum()
        value = self.loglik(matrix @ weights)
        for _ in range(self.newton_steps):
            active = np.flatnonzero(weights > 0)
            if active.size < 2:
                break
            sub = matrix[:, active]
            fitted = sub @ weights[active]
            ratio = self._ratio(fitted)
            grad = ratio @ sub
            if np.max(np.abs(grad - total)) <= 1e-12 * total:
                break
            scaled = sub * np.sqrt(np.divide(ratio, fitted, out=np.zeros_like(ratio), where=fitted > 0))[:, None]
            hess = -scaled.T @ scaled
            basis = null_space(np.ones((1, active.size)))
            reduced = basis.T @ hess @ basis
            try:
                y = np.linalg.solve(reduced, -basis.T @ grad)
            except np.linalg.LinAlgError:
                y = np.linalg.lstsq(reduced, -basis.T @ grad, rcond=None)[0]
            step = basis @ y
            if float(grad @ step) <= 0:
                break
            shrinking = step < 0
            t = min(1.0, np.min(-weights[active][shrinking] / step[shrinking])) if np.any(shrinking) else 1.0
            accepted = False
            for _ in range(60):
                candidate = weights.copy()
                candidate[active] = np.clip(weights[active] + t * step, 0.0, None)
                candidate /= candidate.sum()
                new_value = self.loglik(matrix @ candidate)
                if new_value >= value:
                    accepted = True
                    break
                t *= 0.5
            if not accepted:
                break
            improvement = new_value - value
            weights, value = candidate, new_value
            if improvement <= 1e-15 * max(1.0, abs(value)):
                break
        return weights

    def _corrective(self, matrix, weights):
        weights = self._newton(matrix, self._em(matrix, weights))
        weights[weights < self.prune_tol] = 0.0
        return weights / weights.sum()

    def _best_theta(self, fitted):
        dd = self.directional_derivatives(fitted, self._audit_matrix)
        best = int(np.argmax(dd))
        theta, value = float(self.audit_grid[best]), float(dd[best])
        if self.polish and self.bounds is not None and self.audit_grid.size > 1:
            lo = self.audit_grid[max(best - 1, 0)]
            hi = self.audit_grid[min(best + 1, self.audit_grid.size - 1)]
            res = minimize_scalar(lambda t: -float(self.directional_derivatives(fitted, self.component(t)[:, None])[0]),
                                  bounds=(lo, hi), method='bounded', options=dict(xatol=1e-10))
            if res.success and -res.fun > value:
                theta, value = float(res.x), float(-res.fun)
        return theta, value, dd

    def _move_to(self, fitted, column):
        def slope(alpha):
            mixed = (1.0 - alpha) * fitted + alpha * column
            return float(self._ratio(mixed) @ (column - fitted))

        if slope(1.0 - 1e-12) >= 0:
            return 1.0 - 1e-12
        return brentq(slope, 0.0, 1.0 - 1e-12, xtol=1e-14)

    def obtain_solution(self, initial_support):
        """Runs vertex exchange from uniform weights on `initial_support`.

        Returns: DotMap with .support, .weights, .fitted, .max_dd, .loglik, .iterations,
            .converged, .dd_audit (D on the audit grid at the solution) and .diagnostics.
        """
        support = np.asarray(initial_support, dtype=float).reshape(-1)
        matrix = self._matrix(support)
        weights = self._corrective(matrix, np.full(support.size, 1.0 / support.size))
        keep = weights > 0
        support, matrix, weights = support[keep], matrix[:, keep], weights[keep]

        converged = False
        iterations = 0
        history = [self.loglik(matrix @ weights)]
        while iterations < self.max_iters:
            fitted = matrix @ weights
            theta, max_dd, _ = self._best_theta(fitted)
            if max_dd <= self.dd_tol:
                converged = True
                break
            iterations += 1
            column = self.component(theta)
            alpha = self._move_to(fitted, column)
            hit = np.flatnonzero(support == theta)
            if hit.size:
                weights = (1.0 - alpha) * weights
                weights[hit[0]] += alpha
            else:
                support = np.append(support, theta)
                matrix = np.column_stack([matrix, column])
                weights = np.append((1.0 - alpha) * weights, alpha)
            weights = self._corrective(matrix, weights)
            keep = weights > 0
            support, matrix, weights = support[keep], matrix[:, keep], weights[keep]
            history.append(self.loglik(matrix @ weights))
            if history[-1] < history[-2] - 1e-9 * max(1.0, abs(history[-2])):
                self.diagnostics.append("log-likelihood decreased at iteration %d" % iterations)

        fitted = matrix @ weights
        _, max_dd, dd = self._best_theta(fitted)
        if not converged:
            self.diagnostics.append("max directional derivative %.3g above tolerance %.3g after %d iterations"
                                    % (max_dd, self.dd_tol, iterations))
            logger.warning("Vertex exchange did not converge: max D = %.3g." % max_dd)
        order = np.argsort(support, kind='stable')
        return DotMap(
            support=support[order], weights=weights[order], fitted=fitted, max_dd=max(max_dd, float(dd.max())),
            loglik=self.loglik(fitted), iterations=iterations, converged=converged, dd_audit=dd,
            history=history, diagnostics=list(self.diagnostics),
        )
