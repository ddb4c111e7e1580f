from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import warnings

import numpy as np
import pandas as pd
from dotmap import DotMap
from scipy.integrate import quad, IntegrationWarning
from tqdm import tqdm

from cig.geometry.simplex import ProbabilityVector, CountVector
from cig.misc import logger
from cig.misc.errors import InvalidInputError, QuadratureError
from cig.misc.optimizers.scalar import SafeguardedNewtonOptimizer

QUAD_TOL = 1e-10
SUM_TOL = 1e-9


class PartitionSpec:
    """Adjacent intervals [e_0, e_1), ..., [e_{K-1}, e_K] followed by one bin per atom.

    Arguments:
        edges (array-like): strictly increasing interval edges.
        atoms (tuple): locations of point masses; observations at or beyond an atom go there.
        labels (array-like): (optional) representative statistic per bin, defaults to the
            interval midpoints and the atom locations.
    """

    def __init__(self, edges, atoms=(), labels=None):
        edges = np.asarray(edges, dtype=float).reshape(-1)
        if edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise InvalidInputError("Partition edges must be strictly increasing.")
        self.edges = edges
        self.atoms = tuple(float(a) for a in atoms)
        if labels is None:
            labels = np.append(0.5 * (edges[:-1] + edges[1:]), self.atoms)
        labels = np.asarray(labels, dtype=float)
        if labels.size != self.n_bins:
            raise InvalidInputError("Need one label per bin.")
        self.labels = labels

    @property
    def n_intervals(self):
        return self.edges.size - 1

    @property
    def n_bins(self):
        return self.n_intervals + len(self.atoms)

    @property
    def widths(self):
        return np.diff(self.edges)

    @property
    def max_width(self):
        return float(self.widths.max())

    def locate(self, values):
        """Bin index of every value; values outside the partition are an error."""
        values = np.asarray(values, dtype=float).reshape(-1)
        index = np.searchsorted(self.edges, values, side='right') - 1
        index[values == self.edges[-1]] = self.n_intervals - 1
        for pos, loc in enumerate(self.atoms):
            index[values >= loc] = self.n_intervals + pos
        bad = (index < 0) | (index >= self.n_bins) | (values < self.edges[0])
        if np.any(bad):
            raise InvalidInputError("Values %s fall outside the partition." % values[bad][:5].tolist())
        return index

    def refine(self):
        """Dyadic refinement: every interval split at its midpoint, atoms kept."""
        mids = 0.5 * (self.edges[:-1] + self.edges[1:])
        edges = np.empty(2 * self.edges.size - 1)
        edges[0::2] = self.edges
        edges[1::2] = mids
        return PartitionSpec(edges, self.atoms)

    def to_dict(self):
        return dict(edges=self.edges.tolist(), atoms=list(self.atoms), labels=self.labels.tolist())

    @classmethod
    def from_dict(cls, data):
        return cls(data['edges'], data.get('atoms', ()), data.get('labels'))

    def __repr__(self):
        return "PartitionSpec(%d intervals on [%g, %g], atoms=%s)" % (
            self.n_intervals, self.edges[0], self.edges[-1], list(self.atoms))


def build_partition(domain, n_bins=None, width=None, atoms=()):
    """Equal-width partition of `domain` into `n_bins` intervals, or intervals of length
    `width` with a shorter last one."""
    lo, hi = float(domain[0]), float(domain[1])
    if (n_bins is None) == (width is None):
        raise InvalidInputError("Give exactly one of n_bins and width.")
    if n_bins is not None:
        if n_bins < 1:
            raise InvalidInputError("n_bins must be positive.")
        edges = np.linspace(lo, hi, int(n_bins) + 1)
    else:
        if width <= 0:
            raise InvalidInputError("width must be positive.")
        edges = np.arange(lo, hi, width)
        edges = np.append(edges, hi) if hi - edges[-1] > 1e-12 * max(1.0, abs(hi)) else np.append(edges[:-1], hi)
    return PartitionSpec(edges, atoms)


def partition_for(family, n_bins=None, width=None):
    return build_partition(family.domain, n_bins=n_bins, width=width, atoms=family.atoms)


def _integrate(fn, lo, hi, tol, notes):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, err = quad(fn, lo, hi, epsabs=tol * 1e-3, epsrel=1e-12, limit=200)
    if caught or err > tol:
        notes.append("quadrature on [%g, %g]: error estimate %.3g" % (lo, hi, err))
    return value


def _check_partition(family, partition):
    lo, hi = family.domain
    if abs(partition.edges[0] - lo) > 1e-12 * max(1.0, abs(lo)) or \
            abs(partition.edges[-1] - hi) > 1e-12 * max(1.0, abs(hi)):
        raise InvalidInputError("Partition [%g, %g] does not cover the family domain [%g, %g]." % (
            partition.edges[0], partition.edges[-1], lo, hi))
    if tuple(partition.atoms) != tuple(family.atoms):
        raise InvalidInputError("Partition atoms %s do not match the family's %s." % (partition.atoms, family.atoms))


def bin_probabilities(family, partition, theta, tol=QUAD_TOL):
    """π_k(θ) = ∫_{B_k} f(x; θ) dx by adaptive Gauss-Kronrod, atoms exactly.

    Raises:
        QuadratureError: the masses miss one by more than 1e-9 before renormalisation.
    """
    theta = family.check_theta(theta)
    _check_partition(family, partition)
    notes = []
    masses = [_integrate(lambda x: family.density(x, theta), lo, hi, tol, notes)
              for lo, hi in zip(partition.edges[:-1], partition.edges[1:])]
    masses += [family.atom_mass(loc, theta) for loc in partition.atoms]
    masses = np.clip(np.array(masses), 0.0, None)
    drift = abs(masses.sum() - 1.0)
    if drift > SUM_TOL:
        raise QuadratureError("Bin probabilities sum to %.12g (drift %.3g)." % (masses.sum(), drift))
    for note in notes:
        logger.warning("bin_probabilities: " + note)
    return ProbabilityVector(masses / masses.sum())


def bin_moments(family, partition, theta, fn=None, tol=QUAD_TOL):
    """Per-bin mass, conditional mean of g, and un-normalised central moments
    c2_k = ∫_B (g - m_k)² f, c3_k = ∫_B (g - m_k)³ f. g defaults to the statistic.

    Returns: DotMap of arrays .mass, .mean, .c2, .c3 and the list .notes.
    """
    theta = family.check_theta(theta)
    _check_partition(family, partition)
    fn = family.statistic if fn is None else fn
    notes = []
    mass, mean, c2, c3 = [], [], [], []
    for lo, hi in zip(partition.edges[:-1], partition.edges[1:]):
        p = _integrate(lambda x: family.density(x, theta), lo, hi, tol, notes)
        m = _integrate(lambda x: fn(x) * family.density(x, theta), lo, hi, tol, notes) / p if p > 0 else float(fn(0.5 * (lo + hi)))
        mass.append(p)
        mean.append(m)
        c2.append(_integrate(lambda x: (fn(x) - m) ** 2 * family.density(x, theta), lo, hi, tol, notes))
        c3.append(_integrate(lambda x: (fn(x) - m) ** 3 * family.density(x, theta), lo, hi, tol, notes))
    for loc in partition.atoms:
        mass.append(family.atom_mass(loc, theta))
        mean.append(float(fn(np.array(loc))))
        c2.append(0.0)
        c3.append(0.0)
    return DotMap(mass=np.array(mass), mean=np.array(mean), c2=np.array(c2), c3=np.array(c3), notes=notes)


def bin_counts(partition, values):
    counts = np.bincount(partition.locate(values), minlength=partition.n_bins)
    return CountVector(counts)


def likelihood_discrepancy(family, partition, data, theta_grid, theta0):
    """sup over the θ grid of |log Lik_d(θ)/Lik_d(θ₀) - log Lik_c(θ)/Lik_c(θ₀)|.

    Returns: DotMap with .sup, .argmax and the curves .theta, .discrete, .continuous.
    """
    y = family.transform_data(data)
    counts = bin_counts(partition, y).counts
    theta_grid = np.atleast_1d(np.asarray(theta_grid, dtype=float))

    log_p0 = np.log(bin_probabilities(family, partition, theta0).probs)
    cont0 = family.log_density(y, theta0)
    observed = counts > 0
    discrete, continuous = [], []
    for theta in theta_grid:
        log_p = np.log(bin_probabilities(family, partition, theta).probs)
        discrete.append(float(np.sum(counts[observed] * (log_p[observed] - log_p0[observed]))))
        continuous.append(float(np.sum(family.log_density(y, theta) - cont0)))
    discrete, continuous = np.array(discrete), np.array(continuous)
    gap = np.abs(discrete - continuous)
    best = int(np.argmax(gap))
    return DotMap(sup=float(gap[best]), argmax=float(theta_grid[best]), theta=theta_grid,
                  discrete=discrete, continuous=continuous)


def worst_case_discrepancy(family, partition, theta_grid, theta0, n_obs, n_probe=9):
    """The likelihood-ratio gap maximised over all samples of size n_obs: n_obs times the
    largest per-observation gap |log π_k(θ)/π_k(θ₀) - log f(x;θ)/f(x;θ₀)| over bins and x."""
    theta_grid = np.atleast_1d(np.asarray(theta_grid, dtype=float))
    log_p0 = np.log(bin_probabilities(family, partition, theta0).probs)
    probes = np.linspace(0.0, 1.0, n_probe)
    per_theta = []
    for theta in theta_grid:
        log_ratio = np.log(bin_probabilities(family, partition, theta).probs) - log_p0
        worst = 0.0
        for k, (lo, hi) in enumerate(zip(partition.edges[:-1], partition.edges[1:])):
            x = lo + probes * (hi - lo)
            if partition.atoms:
                x = x[x < partition.atoms[0]]
                if x.size == 0:
                    continue
            cont = np.log(family.density(x, theta)) - np.log(family.density(x, theta0))
            worst = max(worst, float(np.max(np.abs(log_ratio[k] - cont))))
        per_theta.append(n_obs * worst)
    per_theta = np.array(per_theta)
    best = int(np.argmax(per_theta))
    return DotMap(sup=float(per_theta[best]), argmax=float(theta_grid[best]), per_theta=per_theta)


def geometry_discrepancy(family, partition, theta, labels='conditional', reference_theta=None):
    """Gaps between the discretised and continuous mean, Fisher information and skewness.

    For exponential families the score is s - ψ'(θ) with ψ' from quadrature moments; other
    families supply `score`. With u the score, m_k = E(u | B_k) = ∂ log π_k and
    c2_k, c3_k its within-bin central moments,
        I_c - I_d = Σ c2_k,    T_c - T_d = Σ (3 m_k c2_k + c3_k).

    Arguments:
        labels (str): 'conditional' labels s_k = E_{θ_ref}(s | B_k), or 'midpoint' to use
            the partition labels.
        reference_theta (float): θ_ref for conditional labels, defaults to θ.

    Returns: DotMap with the discrete and continuous values and .mu_gap, .fisher_gap,
        .skewness_gap, .width.
    """
    stat = bin_moments(family, partition, theta)
    mu_c = float(np.sum(stat.mean * stat.mass))

    if labels == 'conditional':
        ref = stat if reference_theta is None else bin_moments(family, partition, reference_theta)
        bin_labels = ref.mean
    elif labels == 'midpoint':
        bin_labels = family.statistic(partition.labels)
    else:
        raise InvalidInputError("labels must be 'conditional' or 'midpoint'.")
    mu_d = float(np.sum(bin_labels * stat.mass))

    if family.is_exponential:
        score = DotMap(mean=stat.mean - mu_c, c2=stat.c2, c3=stat.c3)
    else:
        score = bin_moments(family, partition, theta, fn=lambda x: family.score(x, theta))
    mass = stat.mass
    fisher_d = float(np.sum(mass * score.mean ** 2))
    skew_d = float(np.sum(mass * score.mean ** 3))
    fisher_gap = float(np.sum(score.c2))
    skew_gap = float(np.sum(3.0 * score.mean * score.c2 + score.c3))
    for note in stat.notes:
        logger.warning("geometry_discrepancy: " + note)

    return DotMap(
        theta=float(theta), width=partition.max_width,
        mu_d=mu_d, mu_c=mu_c, fisher_d=fisher_d, fisher_c=fisher_d + fisher_gap,
        skewness_d=skew_d, skewness_c=skew_d + skew_gap,
        mu_gap=abs(mu_d - mu_c), fisher_gap=abs(fisher_gap), skewness_gap=abs(skew_gap),
    )


def _discrete_score(family, partition, theta, counts):
    if family.is_exponential:
        stat = bin_moments(family, partition, theta)
        psi_prime = float(np.sum(stat.mean * stat.mass))
        cond = stat.mean - psi_prime
    else:
        cond = bin_moments(family, partition, theta, fn=lambda x: family.score(x, theta)).mean
    return float(np.sum(counts * cond))


def _continuous_score(family, partition, theta, y):
    if family.is_exponential:
        stat = bin_moments(family, partition, theta)
        psi_prime = float(np.sum(stat.mean * stat.mass))
        return float(np.sum(family.statistic(y) - psi_prime))
    return float(np.sum(family.score(y, theta)))


def _diff_step(theta):
    return 1e-5 * max(abs(theta), 1e-3)


def _slope_of(score, theta):
    step = _diff_step(theta)
    return (score(theta + step) - score(theta - step)) / (2.0 * step)


def _solve_score(family, score, start):
    solver = SafeguardedNewtonOptimizer()
    solver.setup(score, lambda t: _slope_of(score, t))
    result = solver.obtain_solution(start, positive=family.positive_parameter)
    if result.diagnostics:
        logger.warning("mle_discrepancy: " + "; ".join(result.diagnostics))
    return result.x


def mle_discrepancy(family, partition, data):
    """Discrete and continuous MLEs of the same sample and their per-observation observed
    information; the gaps are O(bin width).

    Returns: DotMap with .theta_c, .theta_d, .gap, .info_c, .info_d, .info_gap, and for
        families with a mean lifetime also .mu_c, .mu_d.
    """
    y = family.transform_data(data)
    counts = bin_counts(partition, y).counts
    n_obs = y.size

    def continuous(t):
        return _continuous_score(family, partition, t, y)

    def discrete(t):
        return _discrete_score(family, partition, t, counts)

    try:
        theta_c = float(family.continuous_mle(y))
    except NotImplementedError:
        theta_c = _solve_score(family, continuous, family.initial_theta(y))
    theta_d = _solve_score(family, discrete, theta_c)
    info_c = -_slope_of(continuous, theta_c) / n_obs
    info_d = -_slope_of(discrete, theta_d) / n_obs

    result = DotMap(theta_c=theta_c, theta_d=float(theta_d), gap=abs(theta_d - theta_c),
                    info_c=float(info_c), info_d=float(info_d), info_gap=abs(info_d - info_c))
    if hasattr(family, 'mean_lifetime'):
        result.mu_c = family.mean_lifetime(theta_c)
        result.mu_d = family.mean_lifetime(theta_d)
    return result


def _slope(widths, gaps):
    widths, gaps = np.asarray(widths), np.asarray(gaps)
    keep = gaps > 0
    if keep.sum() < 2:
        return float('nan')
    return float(np.polyfit(np.log(widths[keep]), np.log(gaps[keep]), 1)[0])


def refinement_study(family, partition, theta, levels=4, reference_theta=None, theta_grid=None,
                     theta0=None, n_obs=1):
    """Dyadic refinement table of the discrepancies and their log-log slopes in the width.

    Returns: DotMap with .table (pandas.DataFrame, one row per level) and .slopes.
    """
    rows = []
    current = partition
    for level in tqdm(range(levels), desc="refinement", disable=levels < 2):
        geo = geometry_discrepancy(family, current, theta, reference_theta=reference_theta)
        row = dict(level=level, n_bins=current.n_bins, width=current.max_width,
                   mu_gap=geo.mu_gap, fisher_gap=geo.fisher_gap, skewness_gap=geo.skewness_gap)
        if theta_grid is not None:
            row['likelihood_gap'] = worst_case_discrepancy(
                family, current, theta_grid, theta if theta0 is None else theta0, n_obs).sup
        rows.append(row)
        logger.info("refinement level %d: %d bins, width %.4g" % (level, current.n_bins, current.max_width))
        current = current.refine()

    table = pd.DataFrame(rows)
    slopes = {col: _slope(table['width'], table[col])
              for col in ('mu_gap', 'fisher_gap', 'skewness_gap', 'likelihood_gap') if col in table}
    return DotMap(table=table, slopes=slopes)
