from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
from dotmap import DotMap

from .optimizer import Optimizer


class SafeguardedNewtonOptimizer(Optimizer):
    """Root of a scalar function by Newton steps kept inside a sign-change bracket,
    falling back to bisection whenever a step leaves the bracket or stalls."""

    def __init__(self, xtol=1e-12, max_iters=200, max_expansions=80):
        super(SafeguardedNewtonOptimizer, self).__init__()
        self.xtol, self.max_iters, self.max_expansions = xtol, max_iters, max_expansions
        self.fn, self.derivative = None, None

    def setup(self, fn, derivative):
        self.fn, self.derivative = fn, derivative
        self.reset()

    def _bracket(self, x0, positive):
        f0 = self.fn(x0)
        if f0 == 0:
            return x0, x0, f0, f0
        lo, hi = x0, x0
        width = 0.1 * max(abs(x0), 1e-3 if positive else 1.0)
        for _ in range(self.max_expansions):
            if positive:
                lo, hi = lo / 2.0, hi * 2.0
            else:
                lo, hi = lo - width, hi + width
                width *= 2.0
            f_lo, f_hi = self.fn(lo), self.fn(hi)
            if np.sign(f_lo) != np.sign(f0):
                return lo, x0, f_lo, f0
            if np.sign(f_hi) != np.sign(f0):
                return x0, hi, f0, f_hi
        raise RuntimeError("No sign change found around %g." % x0)

    def obtain_solution(self, x0, positive=False):
        """Arguments:
            x0 (float): starting point.
            positive (bool): restrict the search to x > 0, expanding the bracket geometrically.

        Returns: DotMap with .x, .value, .iterations, .diagnostics.
        """
        lo, hi, f_lo, f_hi = self._bracket(float(x0), positive)
        if lo == hi:
            return DotMap(x=lo, value=f_lo, iterations=0, diagnostics=[])
        x = float(x0) if lo < x0 < hi else 0.5 * (lo + hi)
        fx = self.fn(x)
        iterations = 0
        while iterations < self.max_iters and hi - lo > self.xtol * max(1.0, abs(x)):
            iterations += 1
            if fx == 0:
                break
            if np.sign(fx) == np.sign(f_lo):
                lo, f_lo = x, fx
            else:
                hi, f_hi = x, fx
            slope = self.derivative(x)
            step = fx / slope if slope != 0 and np.isfinite(slope) else np.inf
            candidate = x - step
            if not (lo < candidate < hi) or abs(step) > 0.5 * (hi - lo):
                candidate = 0.5 * (lo + hi)
            if candidate == x:
                break
            converged = abs(candidate - x) <= self.xtol * max(1.0, abs(x))
            x, fx = candidate, self.fn(candidate)
            if converged:
                break
        if iterations >= self.max_iters:
            self.diagnostics.append("no convergence in %d iterations (bracket %.3g)" % (iterations, hi - lo))
        return DotMap(x=x, value=fx, iterations=iterations, diagnostics=list(self.diagnostics))
