from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
from dotmap import DotMap
from scipy.optimize import brentq

from cig.misc import logger

from .optimizer import Optimizer


class DampedNewtonOptimizer(Optimizer):
    """Damped Newton for a smooth convex objective f, stopping on the max-norm of ∇f.

    Used for the saddlepoint equation ∇ψ(λ) = μ (objective ψ(λ) - λ·μ), whose Hessian is the
    covariance of the sufficient statistic.
    """

    def __init__(self, tol=1e-10, max_iters=200, max_halvings=30, ill_conditioned=1e12):
        """Creates an instance of this class.

        Arguments:
            tol (float): target max-norm of the gradient.
            max_iters (int): maximum number of Newton iterations.
            max_halvings (int): maximum step halvings in the backtracking line search.
            ill_conditioned (float): Hessian condition number above which the stiffest
                direction is handled by a one-dimensional bracketing search instead.
        """
        super(DampedNewtonOptimizer, self).__init__()
        if tol <= 0:
            raise ValueError("Newton tolerance must be positive.")
        self.tol, self.max_iters = tol, max_iters
        self.max_halvings, self.ill_conditioned = max_halvings, ill_conditioned
        self.objective = None

    def setup(self, objective):
        """Arguments:
            objective (func): λ -> (value, gradient, hessian).
        """
        self.objective = objective
        self.reset()

    def _line_search_along(self, x, direction):
        def slope(t):
            return float(direction @ self.objective(x + t * direction)[1])

        lo, hi = -1.0, 1.0
        for _ in range(200):
            if slope(lo) < 0:
                break
            lo *= 2.0
        for _ in range(200):
            if slope(hi) > 0:
                break
            hi *= 2.0
        if slope(lo) >= 0 or slope(hi) <= 0:
            return x
        return x + brentq(slope, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=500) * direction

    def obtain_solution(self, x0):
        """Runs Newton from x0.

        Returns: DotMap with .x, .residual (max-norm of the gradient), .iterations,
            .condition_number (at the solution) and .diagnostics.
        """
        x = np.array(x0, dtype=float)
        value, grad, hess = self.objective(x)
        cond = np.linalg.cond(hess)
        iterations = 0
        warned = False

        while np.max(np.abs(grad)) > self.tol and iterations < self.max_iters:
            iterations += 1
            cond = np.linalg.cond(hess)
            if not np.isfinite(cond) or cond > self.ill_conditioned:
                if not warned:
                    self.diagnostics.append("ill-conditioned Hessian (cond %.3g)" % cond)
                    logger.warning("Newton: Hessian condition number %.3g, bracketing the stiff direction." % cond)
                    warned = True
                _, vecs = np.linalg.eigh(hess)
                x = self._line_search_along(x, vecs[:, 0])
                value, grad, hess = self.objective(x)
                if np.max(np.abs(grad)) <= self.tol:
                    break

            try:
                step = np.linalg.solve(hess, grad)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(hess, grad, rcond=None)[0]
            t = 1.0
            for _ in range(self.max_halvings):
                candidate = x - t * step
                new_value, new_grad, new_hess = self.objective(candidate)
                if np.isfinite(new_value) and new_value <= value + 1e-4 * t * float(grad @ (-step)) + 1e-15 * abs(value):
                    break
                t *= 0.5
            else:
                self.diagnostics.append("line search stalled at iteration %d" % iterations)
                break
            x, value, grad, hess = candidate, new_value, new_grad, new_hess

        residual = float(np.max(np.abs(grad)))
        if residual > self.tol:
            self.diagnostics.append("residual %.3g above tolerance %.3g" % (residual, self.tol))
            logger.warning("Newton stopped with residual %.3g after %d iterations." % (residual, iterations))

        return DotMap(
            x=x, residual=residual, iterations=iterations,
            condition_number=float(np.linalg.cond(hess)), diagnostics=list(self.diagnostics)
        )
