from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
from dotmap import DotMap
from scipy.stats import multivariate_normal
from tqdm import trange

from cig.misc import logger
from cig.misc.errors import (
    InvalidInputError, DimensionMismatchError, RankError, NoInteriorSolutionError
)
from cig.modeling.expfam import ExpFamilySpec, solve_saddlepoint_equation

DEGENERATE_TOL = 1e-12
_LETTERS = 'abcdefghijklm'


def cumulants(spec, sigma, lam, order=3):
    """Cumulants of the sufficient statistic at p(λ, σ) as exact finite sums.

    Returns: DotMap with .mean, .covariance, .skewness, .kurtosis (order 4 only, None
        otherwise) and .degenerate (covariance numerically singular).
    """
    if order not in (2, 3, 4):
        raise InvalidInputError("Cumulant order must be 2, 3 or 4.")
    probs = spec.point(lam, sigma).probs
    mean = spec.statistics @ probs
    centered = spec.statistics - mean[:, None]
    covariance = np.einsum('ih,jh,h->ij', centered, centered, probs)

    eig = np.linalg.eigvalsh(covariance)
    degenerate = bool(eig[0] <= DEGENERATE_TOL * max(eig[-1], 1.0))
    if degenerate:
        logger.warning("cumulants: covariance is degenerate (smallest eigenvalue %.3g)." % eig[0])

    skewness = kurtosis = None
    if order >= 3:
        skewness = np.einsum('ih,jh,kh,h->ijk', centered, centered, centered, probs)
    if order == 4:
        fourth = np.einsum('ih,jh,kh,lh,h->ijkl', centered, centered, centered, centered, probs)
        kurtosis = fourth - (np.einsum('ij,kl->ijkl', covariance, covariance)
                             + np.einsum('ik,jl->ijkl', covariance, covariance)
                             + np.einsum('il,jk->ijkl', covariance, covariance))
    return DotMap(mean=mean, covariance=covariance, skewness=skewness, kurtosis=kurtosis,
                  degenerate=degenerate)


def _partial_matchings(positions):
    """Every set of disjoint pairs drawn from `positions` (the empty set included)."""
    if len(positions) < 2:
        return [[]]
    first, rest = positions[0], positions[1:]
    out = [m for m in _partial_matchings(rest)]
    for pos, partner in enumerate(rest):
        remaining = rest[:pos] + rest[pos + 1:]
        out.extend([[(first, partner)] + m for m in _partial_matchings(remaining)])
    return out


def hermite_contraction(tensor, z):
    """Σ_{i1..ir} K_{i1..ir} h_{i1..ir}(z) for the multivariate Hermite polynomials of the
    standard normal, h = Σ over partial matchings of (-1)^{#pairs} Π δ(pairs) Π z(rest).

    Arguments:
        tensor (np.ndarray): order-r tensor, d along every axis.
        z (np.ndarray): n x d evaluation points.

    Returns: (n,) array.
    """
    tensor = np.asarray(tensor, dtype=float)
    z = np.atleast_2d(np.asarray(z, dtype=float))
    order = tensor.ndim
    if z.shape[1] != tensor.shape[0]:
        raise DimensionMismatchError("Points must have %d coordinates." % tensor.shape[0])
    total = np.zeros(z.shape[0])
    for matching in _partial_matchings(list(range(order))):
        subscripts = list(_LETTERS[:order])
        for a, b in matching:
            subscripts[b] = subscripts[a]
        paired = {p for pair in matching for p in pair}
        free = [subscripts[p] for p in range(order) if p not in paired]
        if free:
            spec = ''.join(subscripts) + ''.join(',n' + s for s in free) + '->n'
            term = np.einsum(spec, tensor, *([z] * len(free)))
        else:
            # a perfect matching leaves a constant
            term = np.einsum(''.join(subscripts) + '->', tensor) * np.ones(z.shape[0])
        total += (-1) ** len(matching) * term
    return total


def _standardize(tensor, inv_chol):
    letters = _LETTERS[:tensor.ndim]
    targets = _LETTERS[tensor.ndim:2 * tensor.ndim]
    spec = letters + ''.join(',%s%s' % (t, s) for s, t in zip(letters, targets)) + '->' + targets
    return np.einsum(spec, tensor, *([inv_chol] * tensor.ndim))


def _as_points(grid, d):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim == 1 and d == 1:
        grid = grid[:, None]
    grid = np.atleast_2d(grid)
    if grid.shape[1] != d:
        raise DimensionMismatchError("Grid points must have %d coordinates." % d)
    return grid


def edgeworth_density(spec, sigma, lam_true, n_obs, z_grid, order=1, ill_conditioned=1e12):
    """Edgeworth approximation to the density of Z = L⁻¹√N(t̄ - μ), LLᵀ the covariance.

    order=1 keeps the N^{-1/2} skewness term; order=2 adds the N^{-1} term
    k4·h4/24 + (k3⊗k3)·h6/72.

    Raises:
        RankError: the covariance at λ_true is singular.

    Returns: DotMap with .z, .density, .normal (the leading Gaussian term) and the
        standardised cumulants .skewness, .kurtosis.
    """
    if order not in (1, 2):
        raise InvalidInputError("Edgeworth order must be 1 or 2.")
    cum = cumulants(spec, sigma, lam_true, order=4 if order == 2 else 3)
    eig = np.linalg.eigvalsh(cum.covariance)
    if eig[0] <= 0 or eig[-1] / eig[0] > ill_conditioned:
        raise RankError("Covariance of the sufficient statistic is singular at λ_true.")
    inv_chol = np.linalg.inv(np.linalg.cholesky(cum.covariance))
    z = _as_points(z_grid, spec.d)

    normal = multivariate_normal(mean=np.zeros(spec.d), cov=np.eye(spec.d)).pdf(z).reshape(-1)
    k3 = _standardize(cum.skewness, inv_chol)
    correction = 1.0 + hermite_contraction(k3, z) / (6.0 * np.sqrt(n_obs))
    k4 = None
    if order == 2:
        k4 = _standardize(cum.kurtosis, inv_chol)
        correction += (hermite_contraction(k4, z) / 24.0
                       + hermite_contraction(np.multiply.outer(k3, k3), z) / 72.0) / n_obs
    return DotMap(z=z, density=normal * correction, normal=normal, skewness=k3, kurtosis=k4)


def exact_mean_distribution(spec, sigma, lam, n_obs):
    """Exact law of the sample mean of N draws for a 1-d integer-valued statistic.

    Returns: DotMap with .mean_values (achievable means) and .probs.
    """
    if spec.d != 1:
        raise InvalidInputError("Exact enumeration needs a 1-dimensional family.")
    stat = spec.statistics[0]
    if not np.allclose(stat, np.round(stat)):
        raise InvalidInputError("Exact enumeration needs an integer-valued statistic.")
    stat = np.round(stat).astype(int)
    probs = spec.point(lam, sigma).probs
    low = stat.min()
    single = np.zeros(stat.max() - low + 1)
    np.add.at(single, stat - low, probs)

    law = np.array([1.0])
    for _ in range(n_obs):
        law = np.convolve(law, single)
    totals = n_obs * low + np.arange(law.size)
    return DotMap(mean_values=totals / n_obs, probs=law)


def saddlepoint_density(spec, sigma, lam_true, n_obs, tbar_grid, renormalize=False, cell_volume=None,
                        jacobian=None, tol=1e-10):
    """Saddlepoint density of the sample mean t̄ of the sufficient statistic:

        p(t̄) = (N/2π)^{d/2} |Σ(λ̂)|^{-1/2} exp{N [ψ(λ̂) - ψ(λ_true) - (λ̂ - λ_true)·t̄]}

    with λ̂ solving μ(λ̂) = t̄. Grid points off the interior of the mean polytope get nan
    and an entry in `.errors`; the rest of the grid is unaffected.

    Arguments:
        renormalize (bool): scale the density so it sums to one over the grid, each point
            weighted by `cell_volume` (grid spacing when omitted for 1-d grids).
        jacobian (func): (optional) (t̄, λ̂) -> |∂t̄/∂θ̂|, giving `.parameter_density` on the
            scale of a smooth parameter θ.

    Returns: DotMap with .tbar, .lam_hat, .density, .errors [(index, message)] and, when
        renormalised, .normalizer.
    """
    lam_true = spec._check_lam(lam_true)
    points = _as_points(tbar_grid, spec.d)
    psi_true = spec.log_normalizer(lam_true, sigma)
    density = np.full(points.shape[0], np.nan)
    lam_hat = np.full(points.shape, np.nan)
    errors = []
    warm = lam_true.copy()
    for i, tbar in enumerate(points):
        try:
            solved = solve_saddlepoint_equation(spec, sigma, tbar, lam0=warm, tol=tol)
        except NoInteriorSolutionError as e:
            errors.append((i, str(e)))
            continue
        lam = solved.lam
        warm = lam
        sign, logdet = np.linalg.slogdet(spec.fisher_information(lam, sigma))
        if sign <= 0:
            errors.append((i, "singular covariance at the saddlepoint"))
            continue
        exponent = n_obs * (spec.log_normalizer(lam, sigma) - psi_true - (lam - lam_true) @ tbar)
        density[i] = np.exp(0.5 * spec.d * np.log(n_obs / (2.0 * np.pi)) - 0.5 * logdet + exponent)
        lam_hat[i] = lam
    if errors:
        logger.warning("saddlepoint_density: %d of %d grid points outside the mean domain." % (
            len(errors), points.shape[0]))

    result = DotMap(tbar=points, lam_hat=lam_hat, density=density, errors=errors)
    if renormalize:
        if cell_volume is None:
            if spec.d != 1 or points.shape[0] < 2:
                raise InvalidInputError("cell_volume is required to renormalise a multi-dimensional grid.")
            cell_volume = float(np.mean(np.diff(points[:, 0])))
        result.normalizer = float(np.nansum(density) * cell_volume)
        result.density = density / result.normalizer
    if jacobian is not None:
        result.parameter_density = np.array([
            result.density[i] * jacobian(points[i], lam_hat[i]) if np.isfinite(result.density[i]) else np.nan
            for i in range(points.shape[0])
        ])
    return result


def curved_saddlepoint_density(family, partition, theta_hat, n_obs, mu_grid):
    """Density of the mean-lifetime MLE μ̂ = 1/θ̂ for the censored exponential.

    The curve θ ↦ (-log θ, -θ) in the discretised 2-d family is replaced by the 1-d full
    family through p(θ̂) along the tangent direction t(θ̂); μ maps to the mean ū(θ) of the
    projected statistic u = t(θ̂)·a, and the saddlepoint density of ū is carried to the μ
    scale with |dū/dμ| = |t(θ̂)ᵀ Σ(θ) t(θ)| / μ².

    Returns: DotMap with .mu, .density, .ubar, .errors and .projection (metadata).
    """
    full = family.discretized_full_family(partition)
    direction = family.tangent(theta_hat)
    projected = ExpFamilySpec(full.point(family.natural_embedding(theta_hat)).pi, direction[None, :] @ full.statistics)

    mu_grid = np.asarray(mu_grid, dtype=float).reshape(-1)
    if np.any(mu_grid <= 0):
        raise InvalidInputError("Mean lifetimes must be positive.")
    ubar = np.empty_like(mu_grid)
    slope = np.empty_like(mu_grid)
    for i, mu in enumerate(mu_grid):
        theta = 1.0 / mu
        lam = family.natural_embedding(theta)
        ubar[i] = direction @ full.mean(lam)
        slope[i] = abs(direction @ full.fisher_information(lam) @ family.tangent(theta)) / mu ** 2

    sp = saddlepoint_density(projected, None, [0.0], n_obs, ubar)
    return DotMap(
        mu=mu_grid, density=sp.density * slope, ubar=ubar, errors=sp.errors,
        projection=dict(theta_hat=float(theta_hat), direction=direction.tolist(), scale='mean_lifetime'),
    )


def monte_carlo_mle(family, theta, n_obs, n_rep, seed):
    """Seeded Monte Carlo law of the continuous MLE; replicates without an MLE are skipped.

    Returns: DotMap with .theta_hat, .skipped and, for lifetime families, .mu_hat.
    """
    rng = np.random.default_rng(seed)
    estimates, skipped = [], 0
    for _ in trange(n_rep, desc="monte carlo", disable=n_rep < 1000):
        try:
            estimates.append(family.continuous_mle(family.sample(rng, n_obs, theta)))
        except InvalidInputError:
            skipped += 1
    if skipped:
        logger.warning("monte_carlo_mle: %d of %d replicates had no MLE." % (skipped, n_rep))
    result = DotMap(theta_hat=np.array(estimates), skipped=skipped)
    if hasattr(family, 'mean_lifetime'):
        result.mu_hat = 1.0 / result.theta_hat
    return result
