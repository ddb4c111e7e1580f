from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from cig.misc import logger

INTERIOR_MARGIN = 1e-9


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def unique_points(points):
    """Indices of the first occurrence of every distinct point, and (dup, kept) pairs."""
    points = np.asarray(points, dtype=float)
    _, first, inverse = np.unique(points, axis=0, return_index=True, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    duplicates = [(int(i), int(first[inverse[i]])) for i in range(points.shape[0])
                  if first[inverse[i]] != i]
    return np.sort(first), duplicates


def monotone_chain(points, indices=None):
    """Andrew's monotone chain on 2-d points with distinct coordinates.

    Returns (lower, upper): lower runs left to right, upper runs right to left, both hold
    strict vertices only (collinear points are dropped).
    """
    points = np.asarray(points, dtype=float)
    if indices is None:
        indices = np.arange(points.shape[0])
    order = sorted(indices, key=lambda i: (points[i, 0], points[i, 1]))
    scale = max(1.0, float(np.abs(points[order]).max())) if len(order) else 1.0
    tol = 1e-12 * scale * scale

    def chain(seq):
        hull = []
        for i in seq:
            while len(hull) >= 2 and _cross(points[hull[-2]], points[hull[-1]], points[i]) <= tol:
                hull.pop()
            hull.append(i)
        return hull

    return chain(order), chain(order[::-1])


def affine_rank(points, tol=1e-10):
    points = np.asarray(points, dtype=float)
    if points.shape[0] < 2:
        return 0
    centered = points[1:] - points[0]
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def _in_hull_of_others(points, h):
    others = np.delete(np.arange(points.shape[0]), h)
    n = others.size
    a_eq = np.vstack([points[others].T, np.ones((1, n))])
    b_eq = np.append(points[h], 1.0)
    res = linprog(np.zeros(n), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * n, method='highs')
    return res.status == 0


def extreme_points(points):
    """Indices of the vertices of conv(points); repeated points are never vertices.

    Monotone chain for d <= 2, qhull for d = 3, one feasibility LP per point otherwise (and
    whenever qhull rejects a flat cloud).
    """
    points = np.asarray(points, dtype=float)
    n, d = points.shape
    unique, duplicates = unique_points(points)
    repeated = set(i for pair in duplicates for i in pair)
    candidates = [int(i) for i in unique if i not in repeated]

    if d == 1:
        values = points[:, 0]
        found = [i for i in candidates if values[i] in (values.min(), values.max())]
        return sorted(found)
    if d == 2:
        lower, upper = monotone_chain(points, unique)
        return sorted(i for i in set(lower) | set(upper) if i not in repeated)
    if d == 3 and affine_rank(points) == 3:
        try:
            hull = ConvexHull(points)
            return sorted(int(i) for i in hull.vertices if int(i) not in repeated)
        except QhullError:
            logger.warning("qhull failed on a %d-point cloud, falling back to LP." % n)
    return sorted(i for i in candidates if not _in_hull_of_others(points, i))


def _normalize(points, target=None):
    center = points.mean(axis=0)
    scale = np.abs(points - center).max()
    scale = scale if scale > 0 else 1.0
    normed = (points - center) / scale
    return normed if target is None else (normed, (np.asarray(target, dtype=float) - center) / scale)


def interior_margin(points, target):
    """Largest s such that target = Σ w_h P_h with Σw = 1 and every w_h ≥ s.

    The margin is a convex weight, not a distance: it does not change when the points and the
    target are shifted or rescaled together, and it is at most 1/n for n points. s > 0 exactly
    when the target is in the relative interior of conv(points), and callers compare it with
    the interior_margin tolerance.

    Returns: (s, w) with the maximizing weights, or (None, None) when the target is outside the hull.
    """
    points, target = _normalize(np.asarray(points, dtype=float), target)
    n, d = points.shape
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    a_eq = np.zeros((d + 1, n + 1))
    a_eq[:d, :n] = points.T
    a_eq[d, :n] = 1.0
    b_eq = np.append(target, 1.0)
    a_ub = np.hstack([-np.eye(n), np.ones((n, 1))])
    res = linprog(cost, A_ub=a_ub, b_ub=np.zeros(n), A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, None)] * n + [(None, 1.0)], method='highs')
    if res.status != 0:
        return None, None
    return float(res.x[-1]), res.x[:n]


def minimal_face(points, target, tol=INTERIOR_MARGIN):
    """Bins that can carry positive weight in a convex representation of the target: the
    smallest face of conv(points) containing it. Empty when the target is outside."""
    points, target = _normalize(np.asarray(points, dtype=float), target)
    n, d = points.shape
    a_eq = np.vstack([points.T, np.ones((1, n))])
    b_eq = np.append(target, 1.0)
    face = np.zeros(n, dtype=bool)
    for h in range(n):
        if face[h]:
            continue
        cost = np.zeros(n)
        cost[h] = -1.0
        res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * n, method='highs')
        if res.status != 0:
            return []
        face |= res.x > tol
    return np.flatnonzero(face).tolist()
