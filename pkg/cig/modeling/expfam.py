from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
import scipy.linalg
from dotmap import DotMap
from scipy.special import logsumexp

from cig.geometry.fisher_spectrum import fisher_matrix
from cig.geometry.hull_util import interior_margin, minimal_face, INTERIOR_MARGIN
from cig.geometry.simplex import ProbabilityVector, as_probability
from cig.misc import logger
from cig.misc.errors import (
    DimensionMismatchError, RankError, OrthogonalityError, OutsidePolytopeError,
    NoInteriorSolutionError, NotInFamilyError, InvalidInputError
)
from cig.misc.optimizers.newton import DampedNewtonOptimizer

RANK_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-10
POLYTOPE_TOL = 1e-12
OFFSET_SYNTHESIS_CAP = 4096
LOGISTIC_CAP = 20


def _numerical_rank(matrix, tol):
    sv = np.linalg.svd(matrix, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def synthesize_offsets(statistics):
    """Deterministic orthonormal basis (rows) of the complement of span{1, a_1, ..., a_d}."""
    statistics = np.atleast_2d(statistics)
    n_bins = statistics.shape[1]
    span = np.vstack([np.ones((1, n_bins)), statistics]).T
    q_span, _ = np.linalg.qr(span)
    projector = np.eye(n_bins) - q_span @ q_span.T
    q, _, _ = scipy.linalg.qr(projector, pivoting=True)
    basis = q[:, :n_bins - span.shape[1]].T
    for row in basis:
        lead = np.flatnonzero(np.abs(row) > 1e-12)
        if lead.size and row[lead[0]] < 0:
            row *= -1.0
    return basis


class FamilyPoint:
    """A member π of the extended family together with its (λ, σ) coordinates."""

    def __init__(self, lam, sigma, pi):
        self.lam = lam
        self.sigma = sigma
        self.pi = pi

    @property
    def probs(self):
        return self.pi.probs

    def __repr__(self):
        return "FamilyPoint(lam=%s, sigma=%s)" % (self.lam.tolist(), self.sigma.tolist())


class ExpFamilySpec:
    """Full exponential family p(λ, σ)_h ∝ (π⁰_h + Σ_j σ_j b_{j,h}) exp(Σ_i λ_i a_{i,h}).

    Arguments:
        base_point (ProbabilityVector): π⁰, the member at λ = 0, σ = 0.
        statistics (np.ndarray): d x (k+1) matrix A whose rows are the sufficient
            statistics a_1..a_d; {1, a_1, ..., a_d} must be linearly independent.
        offsets (np.ndarray): (optional) (k-d) x (k+1) matrix B of mixture directions
            orthogonal to {1, a_i}. Synthesised on first use when omitted.
        rank_tol (float): relative singular-value threshold of the rank checks.
        orthogonality_tol (float): tolerance on |A Bᵀ|.
    """

    def __init__(self, base_point, statistics, offsets=None, rank_tol=RANK_TOL,
                 orthogonality_tol=ORTHOGONALITY_TOL):
        base = as_probability(base_point)
        statistics = np.atleast_2d(np.asarray(statistics, dtype=float))
        if statistics.shape[1] != len(base):
            raise DimensionMismatchError(
                "Statistics have %d columns but the base point has %d bins." % (statistics.shape[1], len(base))
            )
        d, k = statistics.shape[0], base.dim
        if not 1 <= d <= k:
            raise RankError("Need 1 <= d <= k, got d = %d, k = %d." % (d, k))
        span = np.vstack([np.ones((1, k + 1)), statistics])
        if _numerical_rank(span, rank_tol) < d + 1:
            raise RankError("{1, a_1, ..., a_d} are linearly dependent.")

        if offsets is not None:
            offsets = np.atleast_2d(np.asarray(offsets, dtype=float)).reshape(-1, k + 1)
            if offsets.shape[0] != k - d:
                raise DimensionMismatchError("Need %d offset directions, got %d." % (k - d, offsets.shape[0]))
            if k - d > 0:
                scale = np.abs(offsets).max(axis=1)
                if np.any(np.abs(offsets.sum(axis=1)) > 1e-12 * np.maximum(1.0, scale)):
                    raise OrthogonalityError("Offset directions must sum to zero.")
                if _numerical_rank(offsets, rank_tol) < k - d:
                    raise RankError("Offset directions are linearly dependent.")
                overlap = np.abs(statistics @ offsets.T).max()
                if overlap > orthogonality_tol * max(1.0, np.abs(statistics).max() * np.abs(offsets).max()):
                    raise OrthogonalityError("Offsets are not orthogonal to the statistics (max |AB'| = %g)." % overlap)

        self._base = base
        self._statistics = statistics
        self._offsets = offsets

    @property
    def base_point(self):
        return self._base

    @property
    def statistics(self):
        return self._statistics

    @property
    def d(self):
        return self._statistics.shape[0]

    @property
    def k(self):
        return self._base.dim

    @property
    def offsets(self):
        if self._offsets is None:
            if self.k + 1 > OFFSET_SYNTHESIS_CAP:
                raise ValueError("Refusing to synthesise offsets for %d bins." % (self.k + 1))
            self._offsets = synthesize_offsets(self._statistics)
        return self._offsets

    def _check_lam(self, lam):
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        if lam.shape != (self.d,):
            raise DimensionMismatchError("λ must have %d entries." % self.d)
        return lam

    def _check_sigma(self, sigma):
        if sigma is None:
            return np.zeros(self.k - self.d)
        sigma = np.atleast_1d(np.asarray(sigma, dtype=float))
        if sigma.shape != (self.k - self.d,):
            raise DimensionMismatchError("σ must have %d entries." % (self.k - self.d))
        return sigma

    def shifted_base(self, sigma=None, tol=POLYTOPE_TOL):
        """π⁰ + σᵀB, validated against the σ-polytope."""
        sigma = self._check_sigma(sigma)
        if not np.any(sigma):
            return self._base.probs.copy()
        shifted = self._base.probs + sigma @ self.offsets
        if np.any(shifted < -tol):
            bad = int(np.argmin(shifted))
            raise OutsidePolytopeError("σ violates the polytope at bin %d (value %g)." % (bad, shifted[bad]), bad)
        return np.clip(shifted, 0.0, None)

    def log_normalizer(self, lam, sigma=None):
        lam = self._check_lam(lam)
        shifted = self.shifted_base(sigma)
        support = shifted > 0
        return float(logsumexp(lam @ self._statistics[:, support], b=shifted[support]))

    def point(self, lam, sigma=None):
        lam, sigma_arr = self._check_lam(lam), self._check_sigma(sigma)
        shifted = self.shifted_base(sigma_arr)
        support = shifted > 0
        log_w = np.log(shifted[support]) + lam @ self._statistics[:, support]
        weights = np.zeros_like(shifted)
        weights[support] = np.exp(log_w - log_w.max())
        return FamilyPoint(lam, sigma_arr, ProbabilityVector(weights / weights.sum()))

    def mean(self, lam, sigma=None):
        return self._statistics @ self.point(lam, sigma).probs

    def fisher_information(self, lam, sigma=None):
        """Covariance of the sufficient statistic at p(λ, σ)."""
        probs = self.point(lam, sigma).probs
        centered = self._statistics - (self._statistics @ probs)[:, None]
        return (centered * probs) @ centered.T

    def centered_statistics(self):
        """a_h - a_0 for h = 1..k, the statistics in the π₍₀₎ coordinates."""
        return self._statistics[:, 1:] - self._statistics[:, [0]]

    def support_points(self, sigma=None):
        """(bins, points): the bins charged by π⁰ + σᵀB and their statistic vectors."""
        bins = np.flatnonzero(self.shifted_base(sigma) > 0)
        return bins, self._statistics[:, bins].T

    def _saddlepoint_objective(self, sigma, target, free=None, fixed=None):
        shifted = self.shifted_base(sigma)
        support = shifted > 0
        stats = self._statistics[:, support]
        log_base = np.log(shifted[support])

        def objective(x):
            lam = x if free is None else np.concatenate([fixed, x])
            log_w = log_base + lam @ stats
            psi = logsumexp(log_w)
            probs = np.exp(log_w - psi)
            sub = stats if free is None else stats[free]
            mean = sub @ probs
            centered = sub - mean[:, None]
            hess = (centered * probs) @ centered.T
            value = psi - float((lam if free is None else x) @ target)
            return value, mean - target, hess

        return objective


def make_family(base_point, statistics, offsets=None):
    return ExpFamilySpec(base_point, statistics, offsets)


def point(spec, lam, sigma=None):
    return spec.point(lam, sigma)


def mean_map(spec, sigma, lam):
    """μ(λ) = E_{p(λ,σ)}[a] = Aπ."""
    return spec.mean(lam, sigma)


def _check_interior(spec, sigma, target):
    bins, points = spec.support_points(sigma)
    margin, _ = interior_margin(points, target)
    if margin is None:
        raise NoInteriorSolutionError("Target mean %s lies outside the mean polytope." % np.round(target, 12).tolist())
    if margin <= INTERIOR_MARGIN:
        face = bins[minimal_face(points, target)]
        raise NoInteriorSolutionError(
            "Target mean lies on the boundary face with bins %s; no finite λ solves it." % face.tolist(), face
        )


def solve_saddlepoint_equation(spec, sigma, mu_target, lam0=None, tol=1e-10, max_iters=200,
                               ill_conditioned=1e12):
    """λ̂ with μ(λ̂) = μ_target, by damped Newton on ψ(λ) - λ·μ_target.

    Raises:
        NoInteriorSolutionError: the target is not in the interior of the mean polytope;
            `face` names the bins of the boundary face that contains it.

    Returns: DotMap with .lam, .residual, .iterations, .condition_number, .diagnostics.
    """
    target = np.atleast_1d(np.asarray(mu_target, dtype=float))
    if target.shape != (spec.d,):
        raise DimensionMismatchError("Target mean must have %d entries." % spec.d)
    _check_interior(spec, sigma, target)

    solver = DampedNewtonOptimizer(tol=tol, max_iters=max_iters, ill_conditioned=ill_conditioned)
    solver.setup(spec._saddlepoint_objective(sigma, target))
    start = np.zeros(spec.d) if lam0 is None else spec._check_lam(lam0)
    result = solver.obtain_solution(start)
    return DotMap(
        lam=result.x, residual=result.residual, iterations=result.iterations,
        condition_number=result.condition_number, diagnostics=result.diagnostics
    )


def natural_from_point(spec, pi, sigma=None, tol=1e-9):
    """Recovers λ from a member π of the family through π⁰ + σᵀB."""
    pi = as_probability(pi)
    shifted = spec.shifted_base(sigma)
    support = shifted > 0
    if not np.array_equal(pi.probs > 0, support):
        raise NotInFamilyError("π and the family have different supports.")
    design = np.vstack([np.ones(support.sum()), spec.statistics[:, support]]).T
    if _numerical_rank(design, RANK_TOL) < spec.d + 1:
        raise RankError("λ is not identifiable on the support of π.")
    target = np.log(pi.probs[support]) - np.log(shifted[support])
    coef, _, _, _ = np.linalg.lstsq(design, target, rcond=None)
    residual = np.abs(design @ coef - target).max()
    if residual > tol * max(1.0, np.abs(target).max()):
        raise NotInFamilyError("π is not a member of the family (log-residual %g)." % residual)
    return coef[1:]


def mixed_parameterization(spec, pi, r, sigma=None):
    """(λ_1..λ_r, μ_{r+1}..μ_d): natural coordinates on the head, mean coordinates on the tail."""
    if not 0 <= r <= spec.d:
        raise InvalidInputError("r must lie in [0, d].")
    lam = natural_from_point(spec, pi, sigma)
    mu = spec.statistics @ as_probability(pi).probs
    return DotMap(r=r, natural=lam[:r], mean=mu[r:], coordinates=np.concatenate([lam[:r], mu[r:]]))


def mixed_to_point(spec, mixed, r, sigma=None, tol=1e-10):
    """Inverse of `mixed_parameterization`: solves the tail λ's for the given tail means."""
    mixed = np.asarray(mixed, dtype=float)
    head, tail = mixed[:r], mixed[r:]
    if r == spec.d:
        return spec.point(head, sigma)
    bins, points = spec.support_points(sigma)
    margin, _ = interior_margin(points[:, r:], tail)
    if margin is None or margin <= INTERIOR_MARGIN:
        raise NoInteriorSolutionError("Tail means are not interior to the projected mean polytope.")
    free = np.arange(r, spec.d)
    solver = DampedNewtonOptimizer(tol=tol)
    solver.setup(spec._saddlepoint_objective(sigma, tail, free=free, fixed=head))
    result = solver.obtain_solution(np.zeros(free.size))
    return spec.point(np.concatenate([head, result.x]), sigma)


def family_fisher_from_simplex(spec, lam, sigma=None):
    """Ãᵀ-sandwich of I(π): the statistic covariance rebuilt from the simplex Fisher matrix."""
    centered = spec.centered_statistics()
    return centered @ fisher_matrix(spec.point(lam, sigma).pi) @ centered.T


def mean_level_grid(spec, lam_grid, sigma=None):
    """Means and Fisher condition numbers over a grid of natural parameters (m x d)."""
    lam_grid = np.atleast_2d(np.asarray(lam_grid, dtype=float))
    means = np.array([spec.mean(lam, sigma) for lam in lam_grid])
    conds = np.array([np.linalg.cond(spec.fisher_information(lam, sigma)) for lam in lam_grid])
    return DotMap(lam=lam_grid, mean=means, condition_number=conds)


def vertex_bits(n_obs):
    """(2^N, N) matrix whose row j holds the bits t_1..t_N of j = Σ 2^i t_i."""
    j = np.arange(2 ** n_obs)
    return (j[:, None] >> np.arange(n_obs)[None, :]) & 1


def vertex_index(t):
    t = np.asarray(t, dtype=int)
    return int(np.sum(t << np.arange(t.size)))


def vertex_label(j, n_obs):
    return ''.join(str((j >> i) & 1) for i in range(n_obs))


def logistic_statistic(covariates, t):
    covariates = np.asarray(covariates, dtype=float)
    if covariates.ndim == 1:
        covariates = covariates[:, None]
    return covariates.T @ np.asarray(t, dtype=float)


def logistic_embedding(covariates, cap=LOGISTIC_CAP):
    """Embeds a logistic regression with N binary responses into Δ^{2^N - 1}.

    Vertex j carries the response vector with bits t_i = (j >> i) & 1 and the statistic
    v_d[j] = Σ_i t_i x_{d,i}; the base point is uniform.

    Arguments:
        covariates (np.ndarray): N x D design matrix (a vector means D = 1).
        cap (int): largest N accepted.
    """
    covariates = np.asarray(covariates, dtype=float)
    if covariates.ndim == 1:
        covariates = covariates[:, None]
    n_obs = covariates.shape[0]
    if n_obs > cap:
        raise ValueError("N = %d exceeds the embedding cap of %d observations." % (n_obs, cap))
    statistics = (vertex_bits(n_obs) @ covariates).T
    n_bins = 2 ** n_obs
    logger.info("Logistic embedding: N = %d, D = %d, %d vertices." % (n_obs, covariates.shape[1], n_bins))
    return ExpFamilySpec(ProbabilityVector(np.full(n_bins, 1.0 / n_bins)), statistics)


def total_positivity_rank(spec, thetas, tol=RANK_TOL):
    """Numerical rank of B̃ = B - π(θ₀)1ᵀ, B the columns π(θ_0), ..., π(θ_m) of a 1-d family.

    Returns: DotMap with .rank, .generic (False when the statistic repeats a value) and
        .singular_values of the equilibrated matrix.
    """
    if spec.d != 1:
        raise InvalidInputError("Total positivity rank needs a 1-dimensional family.")
    thetas = np.asarray(thetas, dtype=float).reshape(-1)
    if thetas.size < 2 or np.any(np.diff(thetas) <= 0):
        raise InvalidInputError("θ grid must be strictly increasing with at least two points.")
    stat = spec.statistics[0]
    generic = np.unique(stat).size == stat.size
    if not generic:
        logger.warning("Statistic repeats values; the total positivity rank is not generic.")

    columns = np.array([spec.point([theta]).probs for theta in thetas]).T
    diffs = (columns - columns[:, [0]])[:, 1:]
    for _ in range(2):
        rows = np.abs(diffs).max(axis=1, keepdims=True)
        diffs = diffs / np.where(rows > 0, rows, 1.0)
        cols = np.abs(diffs).max(axis=0, keepdims=True)
        diffs = diffs / np.where(cols > 0, cols, 1.0)
    sv = np.linalg.svd(diffs, compute_uv=False)
    rank = int(np.sum(sv > tol * sv[0])) if sv.size and sv[0] > 0 else 0
    return DotMap(rank=rank, generic=generic, singular_values=sv)
