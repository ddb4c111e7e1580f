from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np

from cig.misc import logger

from .optimizer import Optimizer


class SecularRootFinder(Optimizer):
    """Roots of h(x) = π₀ + x Σ_j m_j λ_j / (x - λ_j), one per interval
    (λ_{i+1}, λ_i) and one in [0, λ_g).

    Each root is stored as origin + δ where the origin is the pole closest to it (or 0 for
    the bottom interval), so gaps λ̃_i - λ_j come out as (origin - λ_j) + δ without
    cancellation.
    """

    def __init__(self, rel_width=1e-14, max_iters=2000, newton_steps=2):
        """Creates an instance of this class.

        Arguments:
            rel_width (float): bisection stops once the bracket is this small relative to δ.
            max_iters (int): hard cap on bisection sweeps.
            newton_steps (int): safeguarded Newton polishing steps after bisection.
        """
        super(SecularRootFinder, self).__init__()
        self.rel_width, self.max_iters, self.newton_steps = rel_width, max_iters, newton_steps
        self.values, self.mults, self.pi0 = None, None, None
        self.origins, self.deltas = None, None

    def setup(self, values, mults, pi0):
        """Arguments:
            values (np.ndarray): distinct positive λ_1 > ... > λ_g.
            mults (np.ndarray): multiplicities m_i.
            pi0 (float): the omitted probability π₀ ≥ 0.
        """
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            raise ValueError("Secular equation needs at least one pole.")
        if np.any(np.diff(values) >= 0):
            raise ValueError("Poles must be strictly decreasing.")
        self.values = values
        self.mults = np.asarray(mults, dtype=float)
        self.pi0 = float(pi0)
        self.reset()

    def reset(self):
        super(SecularRootFinder, self).reset()
        self.origins, self.deltas = None, None

    def _h(self, offsets, deltas):
        # offsets[r, j] = origin_r - λ_j
        gaps = offsets + deltas[:, None]
        x = self.origins + deltas
        return self.pi0 + x * np.sum(self.mults * self.values / gaps, axis=1)

    def _h_prime(self, offsets, deltas):
        gaps = offsets + deltas[:, None]
        return -np.sum(self.mults * self.values ** 2 / gaps ** 2, axis=1)

    def obtain_solution(self):
        """Returns (origins, deltas); the roots are origins + deltas, in decreasing order."""
        lam, g = self.values, self.values.size
        upper = lam
        lower = np.append(lam[1:], 0.0)
        half = 0.5 * (upper - lower)
        mid = lower + half

        origins = lower.copy()
        exact_zero = np.zeros(g, dtype=bool)
        if self.pi0 == 0.0:
            exact_zero[-1] = True

        # which half of each interval holds the root
        self.origins = mid
        h_mid = self._h(mid[:, None] - lam[None, :], np.zeros(g))
        right = h_mid > 0
        origins[right] = upper[right]
        lo = np.where(right, -half, 0.0)
        hi = np.where(right, 0.0, half)
        hit = h_mid == 0
        lo[hit] = hi[hit] = half[hit]
        origins[hit] = lower[hit]

        origins[exact_zero] = 0.0
        self.origins = origins
        offsets = origins[:, None] - lam[None, :]
        self._check_brackets(offsets, lo, hi, right, exact_zero | hit)

        active = ~(exact_zero | hit)
        for _ in range(self.max_iters):
            if not np.any(active):
                break
            mid_d = 0.5 * (lo + hi)
            positive = self._h(offsets, mid_d) > 0
            lo = np.where(active & positive, mid_d, lo)
            hi = np.where(active & ~positive, mid_d, hi)
            width = hi - lo
            scale = np.maximum(np.abs(lo), np.abs(hi))
            stalled = (mid_d == lo) | (mid_d == hi)
            active &= ~((width <= self.rel_width * scale) | stalled)
        else:
            self.diagnostics.append("secular bisection hit max_iters=%d" % self.max_iters)
            logger.warning("Secular bisection did not reach the requested width.")

        deltas = 0.5 * (lo + hi)
        deltas[exact_zero] = 0.0
        polish = ~(exact_zero | hit)
        for _ in range(self.newton_steps):
            value = self._h(offsets, deltas)
            slope = self._h_prime(offsets, deltas)
            with np.errstate(divide='ignore', invalid='ignore'):
                step = deltas - value / slope
            inside = polish & np.isfinite(step) & (step > lo) & (step < hi)
            deltas = np.where(inside, step, deltas)

        self.deltas = deltas
        return origins.copy(), deltas.copy()

    def _check_brackets(self, offsets, lo, hi, right, skip):
        # far end: h > 0 left of the root, h <= 0 right of it
        far = self._h(offsets, np.where(right, lo, hi))
        bad = np.where(right, far <= 0, far > 0)
        # near end: the pole (or h(0) = π₀ on the bottom interval)
        pole_side = np.where(right, -1e-9, 1e-9) * np.where(right, -lo, hi)
        pole_side[~right & (self.origins == 0.0)] = 0.0
        near = self._h(offsets, pole_side)
        bad |= np.where(right, near >= 0, near <= 0)
        bad &= ~skip
        if np.any(bad):
            raise RuntimeError("Invalid secular bracket for roots %s." % np.flatnonzero(bad).tolist())

    def gaps(self):
        """Matrix of λ̃_r - λ_j evaluated without cancellation."""
        return (self.origins[:, None] - self.values[None, :]) + self.deltas[:, None]
