from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
from dotmap import DotMap

from cig.geometry.simplex import as_probability
from cig.misc import logger
from cig.misc.errors import EmptySpectrumError
from cig.misc.optimizers.secular import SecularRootFinder

GROUP_TOL = 1e-12


def fisher_matrix(pi):
    """I(π) = diag(π₍₀₎) - π₍₀₎π₍₀₎ᵀ in the coordinates π₁..π_k (π₀ omitted)."""
    rest = as_probability(pi).probs[1:]
    return np.diag(rest) - np.outer(rest, rest)


def helmert_basis(m):
    """Orthonormal basis of the contrasts {c in R^m : Σc = 0}, one column per vector."""
    basis = np.zeros((m, m - 1))
    for j in range(1, m):
        norm = np.sqrt(j * (j + 1.0))
        basis[:j, j - 1] = 1.0 / norm
        basis[j, j - 1] = -j / norm
    return basis


class SpectralDecomposition:
    """Closed-form eigen-structure of I(π).

    Coordinates are positions 0..k-1 of π₍₀₎, i.e. bins 1..k. The distinct positive values
    λ_1 > ... > λ_g of π₍₀₎ with multiplicities m_i give
      * the simple eigenvalues λ̃_1 > ... > λ̃_g, one in each gap of the λ's, with generator
        blocks λ_j / (λ̃_i - λ_j) on group j;
      * λ_i itself with multiplicity m_i - 1 and the contrast space of its block;
      * 0 on every bin with π_i = 0, eigenvector the unit vector of that bin.
    """

    def __init__(self, k, pi0, distinct_values, multiplicities, groups, simple_eigenvalues,
                 generators, zero_positions, diagnostics=None):
        self.k = k
        self.pi0 = pi0
        self.distinct_values = distinct_values
        self.multiplicities = multiplicities
        self.groups = groups
        self.simple_eigenvalues = simple_eigenvalues
        self.generators = generators
        self.zero_positions = zero_positions
        self.diagnostics = list(diagnostics or [])

    @property
    def repeated_eigenvalues(self):
        """[(λ_i, m_i - 1)] for every group with m_i > 1."""
        return [(float(val), int(m) - 1)
                for val, m in zip(self.distinct_values, self.multiplicities) if m > 1]

    def contrast_basis(self, group):
        idx = self.groups[group]
        basis = np.zeros((self.k, idx.size - 1))
        basis[idx, :] = helmert_basis(idx.size)
        return basis

    def _pieces(self):
        values, vectors = [], []
        norms = np.linalg.norm(self.generators, axis=1)
        for val, gen, norm in zip(self.simple_eigenvalues, self.generators, norms):
            values.append(val)
            vectors.append(gen / norm)
        for i, m in enumerate(self.multiplicities):
            if m > 1:
                basis = self.contrast_basis(i)
                values.extend([self.distinct_values[i]] * (m - 1))
                vectors.extend(basis.T)
        for pos in self.zero_positions:
            unit = np.zeros(self.k)
            unit[pos] = 1.0
            values.append(0.0)
            vectors.append(unit)
        values = np.array(values)
        order = np.argsort(-values, kind='stable')
        return values[order], np.array(vectors)[order].T

    def eigenvalues(self):
        """All k eigenvalues, descending, with multiplicity."""
        return self._pieces()[0]

    def eigenvectors(self):
        """Orthonormal eigenvectors as columns, in the order of `eigenvalues()`."""
        return self._pieces()[1]

    def reconstruct(self):
        values, vectors = self._pieces()
        return (vectors * values) @ vectors.T

    def interlaces(self):
        """λ_1 > λ̃_1 > λ_2 > λ̃_2 > ... > λ_g > λ̃_g ≥ 0."""
        chain = np.empty(2 * self.distinct_values.size)
        chain[0::2] = self.distinct_values
        chain[1::2] = self.simple_eigenvalues
        return bool(np.all(np.diff(chain) < 0) and chain[-1] >= 0)

    def to_dict(self):
        values = self.eigenvalues()
        with np.errstate(divide='ignore'):
            log_values = np.log10(values)
        return {
            "k": self.k,
            "pi0": self.pi0,
            "distinct_values": self.distinct_values.tolist(),
            "multiplicities": self.multiplicities.tolist(),
            "simple_eigenvalues": self.simple_eigenvalues.tolist(),
            "repeated_eigenvalues": [list(pair) for pair in self.repeated_eigenvalues],
            "zero_multiplicity": len(self.zero_positions),
            "eigenvalues": values.tolist(),
            "log10_eigenvalues": [None if not np.isfinite(val) else float(val) for val in log_values],
            "diagnostics": self.diagnostics,
        }


def _group_values(rest, positive, group_tol):
    positions = np.flatnonzero(positive)
    order = positions[np.argsort(-rest[positions], kind='stable')]
    groups, current = [], [order[0]]
    for pos in order[1:]:
        head = rest[current[0]]
        if head - rest[pos] <= group_tol * head:
            current.append(pos)
        else:
            groups.append(np.array(current))
            current = [pos]
    groups.append(np.array(current))
    return groups


def spectral_decomposition(pi, group_tol=GROUP_TOL):
    """Eigenvalues and eigenvectors of I(π) from the secular equation, no dense solver.

    Arguments:
        pi (ProbabilityVector): any point of the closed simplex with π₀ < 1.
        group_tol (float): values of π₍₀₎ within this relative distance are treated as equal.

    Returns: SpectralDecomposition
    """
    pi = as_probability(pi)
    k = pi.dim
    rest = pi.probs[1:]
    positive = rest > 0
    if k == 0 or not np.any(positive):
        raise EmptySpectrumError("I(π) has no positive spectrum: π₀ = 1.")

    diagnostics = []
    groups = _group_values(rest, positive, group_tol)
    distinct = np.array([rest[idx].mean() for idx in groups])
    mults = np.array([idx.size for idx in groups])
    for idx in groups:
        if idx.size > 1 and np.ptp(rest[idx]) > 0:
            note = "grouped near-equal values at bins %s (spread %.3g)" % ((idx + 1).tolist(), np.ptp(rest[idx]))
            diagnostics.append(note)
            logger.info("spectral_decomposition: " + note)

    pi0 = float(pi.probs[0])
    g = distinct.size
    if g == 1:
        # the uniform-block case has a closed form
        lam, m = distinct[0], mults[0]
        simple = np.array([pi0 * lam / (pi0 + m * lam)])
        gaps = simple[:, None] - distinct[None, :]
    else:
        finder = SecularRootFinder()
        finder.setup(distinct, mults, pi0)
        origins, deltas = finder.obtain_solution()
        simple = origins + deltas
        gaps = finder.gaps()
        diagnostics.extend(finder.diagnostics)
    if pi0 == 0.0:
        simple[-1] = 0.0

    generators = np.zeros((g, k))
    for j, idx in enumerate(groups):
        generators[:, idx] = (distinct[j] / gaps[:, j])[:, None]

    return SpectralDecomposition(
        k=k, pi0=pi0, distinct_values=distinct, multiplicities=mults, groups=groups,
        simple_eigenvalues=simple, generators=generators,
        zero_positions=np.flatnonzero(~positive).tolist(), diagnostics=diagnostics
    )


def condition_report(pi, near_replicate_tol=1e-2, group_tol=GROUP_TOL):
    """Conditioning summary of I(π).

    `near_replicate_pairs` lists (λ_i, λ̃_i), i < g, whose relative gap (λ_i - λ̃_i)/λ_i is
    below `near_replicate_tol`; `singular` is true exactly when π₀ = 0.
    """
    decomposition = spectral_decomposition(pi, group_tol=group_tol)
    values = decomposition.eigenvalues()
    lam, lam_tilde = decomposition.distinct_values, decomposition.simple_eigenvalues

    pairs = []
    for i in range(lam.size - 1):
        rel_gap = (lam[i] - lam_tilde[i]) / lam[i]
        if rel_gap < near_replicate_tol:
            pairs.append((float(lam[i]), float(lam_tilde[i])))

    smallest = float(lam_tilde[-1])
    largest = float(values[0])
    n_zero = int(np.sum(values == 0.0))
    return DotMap(
        largest=largest,
        smallest=smallest,
        singular=decomposition.pi0 == 0.0,
        rank=decomposition.k - n_zero,
        condition_number=largest / smallest if smallest > 0 else float('inf'),
        near_replicate_pairs=pairs,
        diagnostics=decomposition.diagnostics,
    )
