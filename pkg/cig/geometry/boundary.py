from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
from dotmap import DotMap
from scipy.spatial import ConvexHull, QhullError

from cig.geometry.hull_util import (
    monotone_chain, unique_points, extreme_points, interior_margin, minimal_face,
    affine_rank, INTERIOR_MARGIN
)
from cig.geometry.simplex import ProbabilityVector, as_counts
from cig.misc import logger
from cig.misc.errors import DimensionMismatchError, InvalidInputError

LIMIT_TOL = 1e-12


class LinePencil:
    """Lines y = slope_h * θ + intercept_h, one per component h."""

    def __init__(self, slopes, intercepts):
        slopes = np.asarray(slopes, dtype=float).reshape(-1)
        intercepts = np.asarray(intercepts, dtype=float).reshape(-1)
        if slopes.size != intercepts.size:
            raise DimensionMismatchError("Need one intercept per slope.")
        if slopes.size == 0 or not (np.all(np.isfinite(slopes)) and np.all(np.isfinite(intercepts))):
            raise InvalidInputError("Line pencil needs finite slopes and intercepts.")
        self.slopes, self.intercepts = slopes, intercepts

    @classmethod
    def from_directions(cls, first, second):
        """The pencil of the two-direction family: component h is θ·v1_h + v2_h."""
        return cls(first, second)

    def __len__(self):
        return self.slopes.size

    def values(self, theta):
        return self.slopes * theta + self.intercepts


def _breakpoints(pencil, chain):
    points = []
    for a, b in zip(chain[:-1], chain[1:]):
        points.append(float((pencil.intercepts[a] - pencil.intercepts[b]) / (pencil.slopes[b] - pencil.slopes[a])))
    return points


def _best_per_slope(dual, indices, pick):
    best = {}
    for i in indices:
        slope = dual[i, 0]
        if slope not in best or pick(dual[i, 1], dual[best[slope], 1]):
            best[slope] = i
    return sorted(best.values())


def envelope_1d(pencil):
    """Classifies every line as on the upper envelope, the lower envelope, or redundant.

    A line is on the upper (lower) envelope exactly when its (slope, intercept) pair is a
    vertex of the upper (lower) hull of the dual points; repeated lines are reported once,
    the later copies are redundant.

    Returns: DotMap with .upper and .lower (indices ordered by increasing θ), .redundant,
        .duplicates [(dup, kept)], and the θ breakpoints of both envelopes.
    """
    dual = np.column_stack([pencil.slopes, pencil.intercepts])
    unique, duplicates = unique_points(dual)
    if duplicates:
        logger.info("envelope_1d: dropped repeated lines %s" % [dup for dup, _ in duplicates])

    _, upper = monotone_chain(dual, _best_per_slope(dual, unique, lambda a, b: a > b))
    lower, _ = monotone_chain(dual, _best_per_slope(dual, unique, lambda a, b: a < b))
    upper = [int(i) for i in upper[::-1]]
    lower = [int(i) for i in lower[::-1]]
    on_envelope = set(upper) | set(lower)

    return DotMap(
        upper=upper,
        lower=lower,
        redundant=[i for i in range(len(pencil)) if i not in on_envelope],
        duplicates=duplicates,
        upper_breakpoints=_breakpoints(pencil, upper),
        lower_breakpoints=_breakpoints(pencil, lower),
    )


def limit_family(spec, direction, sigma=None, tol=LIMIT_TOL):
    """Limit of p(t·direction, σ) as t → ∞: π⁰ + σᵀB renormalised on the argmax face of
    direction·a_h."""
    direction = np.atleast_1d(np.asarray(direction, dtype=float))
    if direction.shape != (spec.d,):
        raise DimensionMismatchError("Direction must have %d entries." % spec.d)
    if not np.any(direction):
        raise InvalidInputError("Direction must be non-zero.")
    shifted = spec.shifted_base(sigma)
    bins = np.flatnonzero(shifted > 0)
    scores = direction @ spec.statistics[:, bins]
    top = scores.max()
    face = bins[scores >= top - tol * max(1.0, np.abs(scores).max())]
    limit = np.zeros_like(shifted)
    limit[face] = shifted[face] / shifted[face].sum()
    return DotMap(face=face.tolist(), limit=ProbabilityVector(limit))


def _vertex_directions_2d(points, lower, upper):
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return [], []
    edge_dirs, vertex_dirs = [], []
    for pos, i in enumerate(hull):
        j = hull[(pos + 1) % len(hull)]
        edge = points[j] - points[i]
        normal = np.array([edge[1], -edge[0]])
        edge_dirs.append(normal / np.linalg.norm(normal))
    for pos in range(len(hull)):
        bisector = edge_dirs[pos - 1] + edge_dirs[pos]
        vertex_dirs.append(bisector / np.linalg.norm(bisector))
    return edge_dirs, vertex_dirs


def reachable_vertices(spec, sigma=None, cap=None):
    """Vertices of the closure reachable as limits along rays in natural parameter space.

    Vertex h is reachable exactly when a_h is an extreme point of {a_h : h in the support};
    every other bin only ever appears inside a larger limit face.

    Arguments:
        spec (ExpFamilySpec): the family.
        sigma (np.ndarray): (optional) offset coordinates, default 0.
        cap (int): (optional) largest number of bins to enumerate.

    Returns: DotMap with .reachable, .redundant, .limit_supports [(direction, face)],
        .dimension (affine dimension of the statistic cloud).
    """
    bins, points = spec.support_points(sigma)
    if cap is not None and bins.size > cap:
        raise ValueError("Refusing to enumerate %d bins (cap %d)." % (bins.size, cap))
    d = points.shape[1]
    local = extreme_points(points)
    reachable = bins[local].tolist()

    directions = []
    if d == 1:
        directions = [np.array([1.0]), np.array([-1.0])]
    elif d == 2:
        unique, _ = unique_points(points)
        lower, upper = monotone_chain(points, unique)
        edge_dirs, vertex_dirs = _vertex_directions_2d(points, lower, upper)
        directions = edge_dirs + vertex_dirs
    elif affine_rank(points) == d:
        try:
            directions = [eq[:d] for eq in ConvexHull(points).equations]
        except QhullError:
            logger.warning("reachable_vertices: no facet directions for a flat cloud.")

    supports = []
    for direction in directions:
        supports.append((np.round(direction, 12).tolist(), limit_family(spec, direction, sigma).face))

    return DotMap(
        reachable=reachable,
        redundant=[int(b) for b in bins if b not in set(reachable)],
        limit_supports=supports,
        dimension=affine_rank(points),
    )


def mle_exists(spec, counts, sigma=None):
    """Does the MLE exist in the interior, i.e. is the observed mean statistic in the
    relative interior of the mean polytope? Otherwise report the face that contains it.

    Returns: DotMap with .exists, .face, .margin, .mean_statistic, .reduced_dimension.
    """
    counts = as_counts(counts)
    if len(counts) != spec.k + 1:
        raise DimensionMismatchError("Counts must cover %d bins." % (spec.k + 1))
    bins, points = spec.support_points(sigma)
    observed = np.flatnonzero(counts.counts)
    if not set(observed.tolist()) <= set(bins.tolist()):
        raise InvalidInputError("Counts fall on bins outside the family's support.")

    mean = spec.statistics @ (counts.counts / float(counts.total))
    dimension = affine_rank(points)
    reduced = dimension < points.shape[1]
    if reduced:
        logger.warning("mle_exists: statistic cloud spans only %d of %d dimensions." % (dimension, points.shape[1]))

    margin, _ = interior_margin(points, mean)
    if margin is not None and margin > INTERIOR_MARGIN:
        return DotMap(exists=True, face=bins.tolist(), margin=margin, mean_statistic=mean,
                      reduced_dimension=reduced)
    face = bins[minimal_face(points, mean)].tolist()
    return DotMap(exists=False, face=face, margin=0.0 if margin is None else margin,
                  mean_statistic=mean, reduced_dimension=reduced)
