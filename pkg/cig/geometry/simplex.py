from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np

from cig.misc.errors import (
    InvalidInputError, DimensionMismatchError, OutOfSimplexError,
    InvalidBasePointError, UndefinedNormError
)

PROB_SUM_TOL = 1e-12
RENORMALIZE_TOL = 1e-9


def _as_float_vector(values, name):
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.size == 0:
        raise InvalidInputError("%s must have at least one entry." % name)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("%s has non-finite entries." % name)
    return arr


class ProbabilityVector:
    """A point of the closed simplex, zeros allowed.

    Arguments:
        probs (array-like): k+1 non-negative entries summing to one. A sum off by at most
            `renormalize_tol` is renormalised once; anything further is rejected.
        zero_threshold (float): entries at or below this value are outside the support.
            The stored entries are never altered by the threshold.
        tol (float): tolerance on negative entries and on the final sum.
    """

    def __init__(self, probs, zero_threshold=0.0, tol=PROB_SUM_TOL, renormalize_tol=RENORMALIZE_TOL):
        probs = _as_float_vector(probs, "Probability vector")
        if np.any(probs < -tol):
            bad = int(np.argmin(probs))
            raise InvalidInputError("Probability vector has negative entry %g at bin %d." % (probs[bad], bad))
        probs = np.clip(probs, 0.0, None)

        drift = abs(probs.sum() - 1.0)
        if drift > renormalize_tol:
            raise InvalidInputError("Probability vector sums to %.15g, not 1." % probs.sum())
        if drift > tol:
            probs = probs / probs.sum()

        self._zero_threshold = zero_threshold
        self._support = np.flatnonzero(probs > zero_threshold)
        if self._support.size == 0:
            raise InvalidInputError("Probability vector has empty support.")

        probs.setflags(write=False)
        self._probs = probs

    @property
    def probs(self):
        return self._probs

    @property
    def dim(self):
        """Simplex dimension k (the vector has k+1 entries)."""
        return self._probs.size - 1

    @property
    def support(self):
        return self._support

    @property
    def is_interior(self):
        return self._support.size == self._probs.size

    def __len__(self):
        return self._probs.size

    def __getitem__(self, item):
        return self._probs[item]

    def __array__(self, dtype=None):
        return np.asarray(self._probs, dtype=dtype)

    def __repr__(self):
        return "ProbabilityVector(%s)" % np.array2string(self._probs, precision=6)

    def to_dict(self):
        return {"probs": self._probs.tolist(), "support": self._support.tolist()}


class MixDirection:
    """A tangent direction of the mixture geometry: k+1 components summing to zero."""

    def __init__(self, values, tol=PROB_SUM_TOL):
        values = _as_float_vector(values, "Mixture direction")
        scale = max(1.0, np.abs(values).max())
        if abs(values.sum()) > tol * scale:
            raise InvalidInputError("Mixture direction sums to %g, not 0." % values.sum())
        values.setflags(write=False)
        self._values = values

    @property
    def values(self):
        return self._values

    def __len__(self):
        return self._values.size

    def __getitem__(self, item):
        return self._values[item]

    def __array__(self, dtype=None):
        return np.asarray(self._values, dtype=dtype)

    def __repr__(self):
        return "MixDirection(%s)" % np.array2string(self._values, precision=6)


class CountVector:
    """Multinomial counts over the k+1 bins, at least one positive."""

    def __init__(self, counts):
        counts = _as_float_vector(counts, "Count vector")
        if np.any(counts < 0):
            raise InvalidInputError("Count vector has negative entries.")
        if not np.all(counts == np.round(counts)):
            raise InvalidInputError("Count vector entries must be integers.")
        counts = counts.astype(np.int64)
        if counts.sum() == 0:
            raise InvalidInputError("Count vector is all zero.")
        counts.setflags(write=False)
        self._counts = counts

    @property
    def counts(self):
        return self._counts

    @property
    def total(self):
        return int(self._counts.sum())

    @property
    def dim(self):
        return self._counts.size - 1

    def __len__(self):
        return self._counts.size

    def __array__(self, dtype=None):
        return np.asarray(self._counts, dtype=dtype)

    def __repr__(self):
        return "CountVector(%s)" % self._counts.tolist()


def as_probability(pi):
    return pi if isinstance(pi, ProbabilityVector) else ProbabilityVector(pi)


def as_counts(counts):
    return counts if isinstance(counts, CountVector) else CountVector(counts)


def as_direction(v):
    return v if isinstance(v, MixDirection) else MixDirection(v)


def _check_same_length(first, second, what):
    if len(first) != len(second):
        raise DimensionMismatchError(
            "%s: lengths %d and %d differ." % (what, len(first), len(second))
        )


def normalize_counts(counts):
    """The saturated MLE π̂ = n/N."""
    counts = as_counts(counts)
    return ProbabilityVector(counts.counts / float(counts.total))


def log_likelihood(counts, pi):
    """Σ n_i log π_i over observed bins; -inf when an observed bin has zero probability."""
    counts, pi = as_counts(counts), as_probability(pi)
    _check_same_length(counts, pi, "log_likelihood")
    observed = counts.counts > 0
    if np.any(pi.probs[observed] == 0.0):
        return -np.inf
    return float(np.sum(counts.counts[observed] * np.log(pi.probs[observed])))


def observed_faces(counts):
    """Returns (P, Z): indices with positive counts, indices with zero counts."""
    counts = as_counts(counts)
    positive = counts.counts > 0
    return tuple(np.flatnonzero(positive).tolist()), tuple(np.flatnonzero(~positive).tolist())


def decompose_direction(v, counts, k_star=None):
    """Splits v = x + y with x in the unobserved-face directions V⁰ and y in V^{k*}.

    x copies v on the unobserved bins other than k*, vanishes on the observed face and puts
    the balancing mass on k*. y carries v on the observed bins, zero elsewhere except k*.

    Arguments:
        v (MixDirection): direction to split.
        counts (CountVector): the data defining the observed face P and its complement Z.
        k_star (int): (optional) an index in Z, defaults to the largest one.

    Returns: (x, y) as MixDirection objects.
    """
    v, counts = as_direction(v), as_counts(counts)
    _check_same_length(v, counts, "decompose_direction")
    _, zero_face = observed_faces(counts)
    if len(zero_face) == 0:
        raise InvalidInputError("No unobserved bins: the split needs a non-empty Z face.")
    if k_star is None:
        k_star = zero_face[-1]
    if k_star not in zero_face:
        raise InvalidInputError("k* = %d is not an unobserved bin." % k_star)

    values = v.values
    others = [i for i in zero_face if i != k_star]
    x = np.zeros_like(values)
    x[others] = values[others]
    x[k_star] = -values[others].sum()
    y = values - x
    return MixDirection(x), MixDirection(y)


def mix_geodesic(pi, v, t, tol=PROB_SUM_TOL):
    """The straight line π + t·v in the mixture affine structure.

    Raises:
        OutOfSimplexError: when the endpoint leaves the simplex, with the largest admissible
            step of the same sign in `max_step`.
    """
    pi, v = as_probability(pi), as_direction(v)
    _check_same_length(pi, v, "mix_geodesic")
    point = pi.probs + t * v.values
    if np.any(point < -tol):
        moving = v.values < 0 if t > 0 else v.values > 0
        steps = pi.probs[moving] / np.abs(v.values[moving])
        max_step = float(np.min(steps)) * np.sign(t)
        raise OutOfSimplexError(
            "Mixture geodesic leaves the simplex at t = %g (largest admissible step %g)." % (t, max_step),
            max_step
        )
    return ProbabilityVector(np.clip(point, 0.0, None), tol=max(tol, PROB_SUM_TOL))


def exp_geodesic(pi, b, theta):
    """The exponential-family line π_i exp(θ b_i) / Σ_j π_j exp(θ b_j) through an interior π."""
    pi = as_probability(pi)
    b = _as_float_vector(b, "Direction")
    _check_same_length(pi, b, "exp_geodesic")
    if not pi.is_interior:
        raise InvalidBasePointError("Exponential geodesics need a strictly positive base point.")
    log_w = np.log(pi.probs) + theta * b
    log_w -= log_w.max()
    weights = np.exp(log_w)
    return ProbabilityVector(weights / weights.sum())


def _norm_weights(pi, *vectors):
    for vec in vectors:
        offending = np.flatnonzero((pi.probs == 0.0) & (vec != 0.0))
        if offending.size:
            bin_index = int(offending[0])
            raise UndefinedNormError(
                "Preferred-point norm undefined: direction is non-zero on bin %d where π vanishes." % bin_index,
                bin_index
            )
    return pi.probs > 0.0


def preferred_inner(v, w, pi):
    """⟨v, w⟩_π = Σ v_i w_i / π_i over the support of π."""
    pi = as_probability(pi)
    v = _as_float_vector(v, "Direction")
    w = _as_float_vector(w, "Direction")
    _check_same_length(v, pi, "preferred_inner")
    _check_same_length(w, pi, "preferred_inner")
    mask = _norm_weights(pi, v, w)
    return float(np.sum(v[mask] * w[mask] / pi.probs[mask]))


def preferred_norm(v, pi):
    """‖v‖_π = sqrt(Σ v_i² / π_i); errors when v charges a bin with π_i = 0."""
    return float(np.sqrt(preferred_inner(v, v, pi)))


def fisher_inverse(pi):
    """Inverse of diag(π₍₀₎) - π₍₀₎π₍₀₎ᵀ, i.e. diag(1/π₍₀₎) + 11ᵀ/π₀."""
    pi = as_probability(pi)
    if not pi.is_interior:
        raise InvalidBasePointError("The Fisher information is singular when some π_i vanishes.")
    rest = pi.probs[1:]
    return np.diag(1.0 / rest) + np.ones((rest.size, rest.size)) / pi.probs[0]


def quadratic_loglik(counts, pi, pi_hat=None):
    """ℓ(π̂) - (N/2)‖π - π̂‖²_π̂, the local quadratic approximation of the log-likelihood."""
    counts, pi = as_counts(counts), as_probability(pi)
    pi_hat = normalize_counts(counts) if pi_hat is None else as_probability(pi_hat)
    diff = pi.probs - pi_hat.probs
    return log_likelihood(counts, pi_hat) - 0.5 * counts.total * preferred_norm(diff, pi_hat) ** 2
