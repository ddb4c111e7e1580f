from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
from dotmap import DotMap
from scipy.linalg import null_space
from scipy.stats import binom

from cig.geometry.simplex import (
    ProbabilityVector, as_counts, as_probability, normalize_counts, observed_faces, preferred_norm
)
from cig.misc import logger
from cig.misc.errors import (
    DimensionMismatchError, InfeasibleMixtureError, InvalidInputError, UndefinedNormError
)
from cig.misc.optimizers.vertex_exchange import VertexExchangeOptimizer

AUDIT_POINTS = 10
PRUNE_TOL = 1e-8


class ComponentCurve:
    """θ ↦ π(θ) in Δ^k over a compact interval [lower, upper]."""

    def __init__(self, fn, lower, upper, n_bins, name="curve"):
        if not lower < upper:
            raise InvalidInputError("Curve interval needs lower < upper.")
        self._fn = fn
        self.lower, self.upper = float(lower), float(upper)
        self.n_bins = int(n_bins)
        self.name = name

    def __call__(self, theta):
        probs = np.asarray(self._fn(float(theta)), dtype=float)
        if probs.shape != (self.n_bins,):
            raise DimensionMismatchError("Curve returned %d probabilities, expected %d." % (probs.size, self.n_bins))
        return probs

    def matrix(self, thetas):
        """(k+1) x m matrix with columns π(θ_j)."""
        return np.column_stack([self(theta) for theta in thetas])

    def to_dict(self):
        return dict(name=self.name, lower=self.lower, upper=self.upper, n_bins=self.n_bins)


def binomial_curve(n_trials):
    """Bin(n, p) with θ = p on [0, 1]."""
    support = np.arange(n_trials + 1)
    return ComponentCurve(lambda p: binom.pmf(support, n_trials, p), 0.0, 1.0, n_trials + 1,
                          name="binomial(%d)" % n_trials)


def family_curve(spec, lower, upper):
    """A 1-d exponential family traced by its natural parameter over [lower, upper]."""
    if spec.d != 1:
        raise InvalidInputError("A component curve needs a 1-dimensional family.")
    return ComponentCurve(lambda theta: spec.point([theta]).probs, lower, upper, spec.k + 1, name="family")


def lindsay_projection(pi, observed):
    """Coordinates of π on the observed bins; the log-likelihood depends on π only through them."""
    pi = as_probability(pi)
    observed = np.asarray(observed, dtype=int).reshape(-1)
    if observed.size == 0:
        raise InvalidInputError("The observed index set must be non-empty.")
    return pi.probs[observed]


def refine_grid(grid, factor):
    """Splits every segment of an increasing grid into `factor` equal pieces."""
    grid = np.asarray(grid, dtype=float)
    if factor < 1:
        raise InvalidInputError("Refinement factor must be at least 1.")
    steps = np.linspace(0.0, 1.0, int(factor) + 1)[:-1]
    fine = (grid[:-1, None] + steps[None, :] * np.diff(grid)[:, None]).reshape(-1)
    return np.append(fine, grid[-1])


def _inverse_weights(curve, pi_ref, probe):
    pi_ref = as_probability(pi_ref)
    if pi_ref.dim + 1 != curve.n_bins:
        raise DimensionMismatchError("Reference point must have %d entries." % curve.n_bins)
    reach = curve.matrix(probe).max(axis=1)
    bad = np.flatnonzero((pi_ref.probs == 0) & (reach > 0))
    if bad.size:
        raise UndefinedNormError("Reference point vanishes on bin %d which the curve charges." % bad[0], int(bad[0]))
    return np.divide(1.0, pi_ref.probs, out=np.zeros(curve.n_bins), where=pi_ref.probs > 0)


def _chord_distance(points, left, right, inv_ref):
    """Distances in ‖·‖_π_ref from the columns of `points` to the segment [left, right]."""
    u = points - right[:, None]
    v = left - right
    vv = float(np.sum(v * v * inv_ref))
    rho = np.zeros(points.shape[1]) if vv == 0 else np.clip((inv_ref * v) @ u / vv, 0.0, 1.0)
    resid = u - v[:, None] * rho[None, :]
    return np.sqrt(np.sum(resid * resid * inv_ref[:, None], axis=0))


def _segment_audit(curve, a, b, inv_ref, n_points=AUDIT_POINTS):
    thetas = a + (b - a) * np.arange(1, n_points + 1) / (n_points + 1.0)
    return float(_chord_distance(curve.matrix(thetas), curve(b), curve(a), inv_ref).max())


def adaptive_support(curve, eps_target, pi_ref, n_initial=5, max_points=20000):
    """Polygonal approximation of the curve: segments are bisected until the midpoint lies
    within eps_target of the chord in ‖·‖_π_ref, then every segment is audited at
    AUDIT_POINTS interior points and the offenders are split again.

    Returns: DotMap with .grid and .eps (the audited maximum distance).
    """
    if eps_target <= 0:
        raise InvalidInputError("eps_target must be positive.")
    inv_ref = _inverse_weights(curve, pi_ref, np.linspace(curve.lower, curve.upper, 101))
    grid = list(np.linspace(curve.lower, curve.upper, n_initial))

    while True:
        done, pending = [grid[0]], list(zip(grid[:-1], grid[1:]))[::-1]
        while pending:
            a, b = pending.pop()
            mid = 0.5 * (a + b)
            dist = _chord_distance(curve(mid)[:, None], curve(b), curve(a), inv_ref)[0]
            if dist > eps_target and len(done) + len(pending) < max_points and mid not in (a, b):
                pending.extend([(mid, b), (a, mid)])
            else:
                done.append(b)
        grid = done
        audits = np.array([_segment_audit(curve, a, b, inv_ref) for a, b in zip(grid[:-1], grid[1:])])
        offenders = np.flatnonzero(audits > eps_target)
        if offenders.size == 0 or len(grid) + offenders.size > max_points:
            break
        for pos in offenders[::-1]:
            grid.insert(pos + 1, 0.5 * (grid[pos] + grid[pos + 1]))

    eps = float(audits.max()) if audits.size else 0.0
    if eps > eps_target:
        logger.warning("adaptive_support: audited ε %.3g exceeds the target %.3g at the point cap." % (eps, eps_target))
    return DotMap(grid=np.array(grid), eps=eps)


class MixtureFit:
    """Result of `npmle`: the mixing distribution, the fitted point and its certificates."""

    def __init__(self, support, weights, fitted, max_dd, eps, gap_bound, loglik, saturated_loglik,
                 converged, n_iterations, dd_curve, grid, curve, dd_tol, diagnostics=()):
        self.support = support
        self.weights = weights
        self.fitted = fitted
        self.max_dd = max_dd
        self.eps = eps
        self.gap_bound = gap_bound
        self.loglik = loglik
        self.saturated_loglik = saturated_loglik
        self.converged = converged
        self.n_iterations = n_iterations
        self.dd_curve = dd_curve
        self.grid = grid
        self.curve = curve
        self.dd_tol = dd_tol
        self.diagnostics = list(diagnostics)

    @property
    def deviance(self):
        return 2.0 * (self.saturated_loglik - self.loglik)

    def to_dict(self):
        return dict(
            support=self.support.tolist(), weights=self.weights.tolist(), fitted=self.fitted.probs.tolist(),
            max_dd=self.max_dd, dd_tol=self.dd_tol, eps=self.eps, gap_bound=self.gap_bound,
            loglik=self.loglik, saturated_loglik=self.saturated_loglik, deviance=self.deviance,
            converged=self.converged, n_iterations=self.n_iterations, n_grid=int(self.grid.size),
            curve=self.curve.to_dict(), diagnostics=self.diagnostics,
        )


def _observed_setup(counts, curve):
    counts = as_counts(counts)
    if len(counts) != curve.n_bins:
        raise DimensionMismatchError("Counts cover %d bins, the curve %d." % (len(counts), curve.n_bins))
    observed = np.array(observed_faces(counts)[0], dtype=int)
    probe = curve.matrix(np.linspace(curve.lower, curve.upper, 201))[observed]
    missed = observed[probe.max(axis=1) <= 0]
    if missed.size:
        raise InfeasibleMixtureError("The curve never charges observed bin %d; the likelihood is -inf." % missed[0])
    return counts, observed


def _saturated_loglik(counts):
    n = counts.counts[counts.counts > 0].astype(float)
    return float(np.sum(n * np.log(n / counts.total)))


def caratheodory_reduce(matrix, weights, max_points, tol=PRUNE_TOL):
    """Moves weight along null directions of [L; 1ᵀ] until at most max_points support
    points remain; Lw and Σw are unchanged."""
    weights = weights.copy()
    while np.count_nonzero(weights) > max_points:
        active = np.flatnonzero(weights)
        basis = null_space(np.vstack([matrix[:, active], np.ones((1, active.size))]))
        if basis.shape[1] == 0:
            break
        z = basis[:, 0]
        if not np.any(z > 0):
            z = -z
        ratios = np.full(active.size, np.inf)
        ratios[z > 0] = weights[active][z > 0] / z[z > 0]
        drop = int(np.argmin(ratios))
        weights[active] = np.clip(weights[active] - ratios[drop] * z, 0.0, None)
        weights[active[drop]] = 0.0
        weights[weights < tol] = 0.0
        weights /= weights.sum()
    return weights


def _solve(counts, observed, curve, support, audit_grid, dd_tol, polish, prune_tol=PRUNE_TOL):
    solver = VertexExchangeOptimizer(dd_tol=dd_tol, prune_tol=prune_tol, polish=polish)
    solver.setup(counts.counts[observed], lambda theta: curve(theta)[observed], audit_grid,
                 bounds=(curve.lower, curve.upper) if polish else None)
    return solver.obtain_solution(support)


def fit_weights_on_grid(counts, curve, grid, restrict_to_observed=True, dd_tol=None):
    """Weight-only NPMLE with support restricted to a fixed grid.

    Returns: DotMap with .support, .weights, .loglik, .max_dd, .converged.
    """
    counts, observed = _observed_setup(counts, curve)
    rows = observed if restrict_to_observed else np.arange(curve.n_bins)
    dd_tol = 1e-6 * counts.total if dd_tol is None else dd_tol
    grid = np.asarray(grid, dtype=float)
    res = _solve(counts, rows, curve, grid, grid, dd_tol, polish=False)
    return DotMap(support=res.support, weights=res.weights, loglik=res.loglik, max_dd=res.max_dd,
                  converged=res.converged)


def _fitted_vector(curve, support, weights):
    return ProbabilityVector(curve.matrix(support) @ weights)


def npmle(counts, curve, eps_target=1e-3, dd_tol=None, audit_factor=AUDIT_POINTS, prune_tol=PRUNE_TOL):
    """Nonparametric MLE of a mixture of the curve's members.

    The curve is replaced by a polygon within eps_target of it (anchored at the empirical
    distribution smoothed by 1/N uniform mass), the mixing weights are optimised by vertex
    exchange over the continuous parameter interval until max_θ D(θ) ≤ dd_tol, and ε is
    re-audited at the fitted point, re-refining once if it more than doubled.

    Raises:
        InfeasibleMixtureError: the curve gives zero probability to an observed bin for every θ.

    Returns: MixtureFit.
    """
    counts, observed = _observed_setup(counts, curve)
    total = counts.total
    dd_tol = 1e-6 * total if dd_tol is None else dd_tol
    empirical = normalize_counts(counts).probs
    anchor = (1.0 - 1.0 / total) * empirical + 1.0 / (total * curve.n_bins)

    support = adaptive_support(curve, eps_target, ProbabilityVector(anchor))
    res = _solve(counts, observed, curve, support.grid, refine_grid(support.grid, audit_factor), dd_tol, True,
                 prune_tol)
    eps = support.eps
    diagnostics = list(res.diagnostics)

    fitted = _fitted_vector(curve, res.support, res.weights)
    if fitted.is_interior:
        inv_fit = 1.0 / fitted.probs
        audited = max(_segment_audit(curve, a, b, inv_fit) for a, b in zip(support.grid[:-1], support.grid[1:]))
        if audited > 2.0 * eps:
            logger.info("npmle: ε grew from %.3g to %.3g at the fitted point, refining." % (eps, audited))
            support = adaptive_support(curve, eps_target, fitted)
            res = _solve(counts, observed, curve, np.union1d(support.grid, res.support),
                         refine_grid(support.grid, audit_factor), dd_tol, True, prune_tol)
            diagnostics = list(res.diagnostics)
            eps = support.eps
        else:
            eps = max(eps, audited)

    matrix = curve.matrix(res.support)
    weights = caratheodory_reduce(matrix[observed], res.weights, observed.size, tol=prune_tol)
    keep = weights > 0
    fit_support, weights = res.support[keep], weights[keep] / weights[keep].sum()
    fitted = _fitted_vector(curve, fit_support, weights)
    loglik = float(np.sum(counts.counts[observed] * np.log(fitted.probs[observed])))

    fit = MixtureFit(
        support=fit_support, weights=weights, fitted=fitted, max_dd=res.max_dd, eps=eps, gap_bound=0.0,
        loglik=loglik, saturated_loglik=_saturated_loglik(counts), converged=res.converged,
        n_iterations=res.iterations, grid=support.grid, curve=curve, dd_tol=dd_tol, diagnostics=diagnostics,
        dd_curve=None,
    )
    audit = refine_grid(support.grid, audit_factor)
    fit.dd_curve = DotMap(theta=audit, dd=directional_derivative(fit, counts, audit))
    fit.max_dd = max(fit.max_dd, float(fit.dd_curve.dd.max()))
    fit.gap_bound = gap_bound(fit, counts)
    logger.info("npmle: %d support points, max D %.3g (tol %.3g), gap bound %.3g." % (
        fit.support.size, fit.max_dd, dd_tol, fit.gap_bound))
    return fit


def directional_derivative(fit, counts, theta):
    """D(θ) = Σ_{i observed} n_i π_i(θ)/π̂_i - N, for a scalar θ or an array of them."""
    counts = as_counts(counts)
    observed = np.array(observed_faces(counts)[0], dtype=int)
    fitted = fit.fitted.probs[observed]
    if np.any(fitted <= 0):
        raise InvalidInputError("The fit gives zero probability to observed bin %d." % observed[np.argmin(fitted)])
    thetas = np.atleast_1d(np.asarray(theta, dtype=float))
    values = (counts.counts[observed] / fitted) @ fit.curve.matrix(thetas)[observed] - counts.total
    return values if np.ndim(theta) else float(values[0])


def gap_bound(fit, counts):
    """ε N ‖π̂^G - π̂‖_π̂: first-order bound on ℓ(π̂^NP) - ℓ(π̂)."""
    counts = as_counts(counts)
    diff = normalize_counts(counts).probs - fit.fitted.probs
    return float(fit.eps * counts.total * preferred_norm(diff, fit.fitted))
