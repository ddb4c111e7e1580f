from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
import scipy.stats as stats
from scipy.special import ndtr

from cig.geometry.simplex import ProbabilityVector
from cig.misc.errors import UnknownFamilyError, InvalidInputError

FAMILIES = {}


def register_family(name):
    def register(cls):
        cls.name = name
        FAMILIES[name] = cls
        return cls
    return register


def make_continuous_family(name, **params):
    if name not in FAMILIES:
        raise UnknownFamilyError("Unknown family '%s', choose from %s." % (name, sorted(FAMILIES)))
    return FAMILIES[name](**params)


class ContinuousFamily:
    """A parametric family on an interval, optionally with point masses (atoms).

    Subclasses provide `density` (the continuous part, integrating together with the atom
    masses to one), `statistic`, and either mark themselves exponential (score s - ψ') or
    implement `score`.
    """
    name = None
    is_exponential = False
    positive_parameter = False
    atoms = ()

    def __init__(self, lower, upper):
        if not lower < upper:
            raise InvalidInputError("Family domain needs lower < upper.")
        self.domain = (float(lower), float(upper))

    def density(self, x, theta):
        raise NotImplementedError("Must be implemented in subclass.")

    def statistic(self, x):
        raise NotImplementedError("Must be implemented in subclass.")

    def atom_mass(self, location, theta):
        raise NotImplementedError("Must be implemented in subclass.")

    def score(self, x, theta):
        raise NotImplementedError("Must be implemented in subclass.")

    def check_theta(self, theta):
        return float(theta)

    def transform_data(self, data):
        data = np.asarray(data, dtype=float).reshape(-1)
        lo, hi = self.domain
        if np.any(data < lo) or np.any(data > hi):
            raise InvalidInputError("Observations fall outside the domain [%g, %g]." % (lo, hi))
        return data

    def log_density(self, x, theta):
        """log f for observations already mapped by `transform_data`; atoms use their mass."""
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        at_atom = np.zeros(x.shape, dtype=bool)
        for loc in self.atoms:
            hit = x >= loc
            out[hit] = np.log(self.atom_mass(loc, theta))
            at_atom |= hit
        with np.errstate(divide='ignore'):
            out[~at_atom] = np.log(self.density(x[~at_atom], theta))
        return out

    def continuous_mle(self, data):
        raise NotImplementedError("Must be implemented in subclass.")

    def initial_theta(self, data):
        return float(np.mean(self.statistic(data)))

    def sample(self, rng, size, theta):
        raise NotImplementedError("Must be implemented in subclass.")


@register_family("truncated_normal")
class TruncatedNormal(ContinuousFamily):
    """N(θ, scale²) restricted to [lower, upper]; θ/scale² is the natural parameter of x."""
    is_exponential = True

    def __init__(self, lower=-5.0, upper=5.0, scale=1.0):
        super(TruncatedNormal, self).__init__(lower, upper)
        self.scale = float(scale)

    def _dist(self, theta):
        lo, hi = self.domain
        return stats.truncnorm((lo - theta) / self.scale, (hi - theta) / self.scale, loc=theta, scale=self.scale)

    def _log_mass(self, theta):
        lo, hi = self.domain
        upper, lower = (hi - theta) / self.scale, (lo - theta) / self.scale
        # mass of the window, taken on the side away from the far tail
        if lower > 0:
            return np.log(ndtr(-lower) - ndtr(-upper))
        return np.log(ndtr(upper) - ndtr(lower))

    def density(self, x, theta):
        z = (np.asarray(x, dtype=float) - theta) / self.scale
        return np.exp(-0.5 * z * z - self._log_mass(theta)) / (np.sqrt(2.0 * np.pi) * self.scale)

    def statistic(self, x):
        return np.asarray(x, dtype=float) / self.scale ** 2

    def initial_theta(self, data):
        return float(np.mean(data))

    def sample(self, rng, size, theta):
        return self._dist(theta).rvs(size=size, random_state=rng)


@register_family("truncated_exponential")
class TruncatedExponential(ContinuousFamily):
    """Density ∝ exp(θx) on [lower, upper], θ the natural parameter (θ = -rate)."""
    is_exponential = True

    def __init__(self, lower=0.0, upper=10.0):
        super(TruncatedExponential, self).__init__(lower, upper)

    def log_normalizer(self, theta):
        lo, hi = self.domain
        if abs(theta) < 1e-12:
            return np.log(hi - lo)
        if theta > 0:
            return theta * hi + np.log(-np.expm1(-theta * (hi - lo))) - np.log(theta)
        return theta * lo + np.log(-np.expm1(theta * (hi - lo))) - np.log(-theta)

    def density(self, x, theta):
        x = np.asarray(x, dtype=float)
        return np.exp(theta * x - self.log_normalizer(theta))

    def statistic(self, x):
        return np.asarray(x, dtype=float)

    def initial_theta(self, data):
        return 0.0

    def sample(self, rng, size, theta):
        lo, hi = self.domain
        u = rng.uniform(size=size)
        if abs(theta) < 1e-12:
            return lo + u * (hi - lo)
        # inverse cdf, written relative to lo to stay finite for large |θ|
        return lo + np.log1p(u * np.expm1(theta * (hi - lo))) / theta


@register_family("censored_exponential")
class CensoredExponential(ContinuousFamily):
    """Exponential lifetimes with rate θ observed up to a censoring time t.

    The observation is y = min(z, t): density θ e^{-θy} on [0, t) plus an atom of mass
    e^{-θt} at t.
    """
    positive_parameter = True

    def __init__(self, censor_time=750.0):
        super(CensoredExponential, self).__init__(0.0, censor_time)
        self.censor_time = float(censor_time)
        self.atoms = (self.censor_time,)

    def check_theta(self, theta):
        theta = float(theta)
        if theta <= 0:
            raise InvalidInputError("The exponential rate must be positive.")
        return theta

    def transform_data(self, data):
        data = np.asarray(data, dtype=float).reshape(-1)
        if np.any(data < 0):
            raise InvalidInputError("Lifetimes must be non-negative.")
        return np.minimum(data, self.censor_time)

    def density(self, x, theta):
        x = np.asarray(x, dtype=float)
        return theta * np.exp(-theta * x)

    def atom_mass(self, location, theta):
        return np.exp(-theta * location)

    def statistic(self, x):
        return np.asarray(x, dtype=float)

    def score(self, x, theta):
        x = np.asarray(x, dtype=float)
        return np.where(x >= self.censor_time, -self.censor_time, 1.0 / theta - x)

    def continuous_mle(self, data):
        """θ̂ = (#uncensored) / Σ min(z, t)."""
        y = self.transform_data(data)
        uncensored = np.sum(y < self.censor_time)
        if uncensored == 0:
            raise InvalidInputError("Every observation is censored; the MLE is at θ = 0.")
        return uncensored / y.sum()

    def initial_theta(self, data):
        return self.continuous_mle(data)

    def sample(self, rng, size, theta):
        return rng.exponential(1.0 / theta, size=size)

    def natural_embedding(self, theta):
        """(λ¹, λ²) = (-log θ, -θ) in the full family with statistics (censored, y)."""
        return np.array([-np.log(theta), -theta])

    def tangent(self, theta):
        return np.array([-1.0 / theta, -1.0])

    def full_log_normalizer(self, lam):
        lam1, lam2 = lam
        t = self.censor_time
        interval = t if lam2 == 0 else np.expm1(lam2 * t) / lam2
        return float(np.log(interval + np.exp(lam1 + lam2 * t)))

    @staticmethod
    def mean_lifetime(theta):
        return 1.0 / theta

    def discretized_full_family(self, partition):
        """The 2-d exponential family on the bins: statistics (censoring indicator, bin label),
        base point ∝ bin length for intervals and 1 for the atom."""
        from cig.modeling.expfam import ExpFamilySpec

        if len(partition.atoms) != 1:
            raise InvalidInputError("The censored family needs a partition with one atom bin.")
        indicator = np.zeros(partition.n_bins)
        indicator[partition.n_intervals:] = 1.0
        weights = np.append(partition.widths, 1.0)
        base = ProbabilityVector(weights / weights.sum())
        return ExpFamilySpec(base, np.vstack([indicator, partition.labels]))
