import numpy as np
import pytest
from numpy.testing import assert_allclose

from cig.geometry.simplex import exp_geodesic
from cig.misc.errors import (
    RankError, OrthogonalityError, OutsidePolytopeError, NoInteriorSolutionError, NotInFamilyError
)
from cig.modeling.expfam import (
    ExpFamilySpec, make_family, point, mean_map, solve_saddlepoint_equation, natural_from_point,
    mixed_parameterization, mixed_to_point, family_fisher_from_simplex, mean_level_grid,
    synthesize_offsets, logistic_embedding, logistic_statistic, vertex_index, vertex_label,
    total_positivity_rank
)

EXAMPLE5 = [[1, 2, 3, 4], [1, 4, 9, -1]]


@pytest.fixture
def example5():
    return make_family(np.full(4, 0.25), EXAMPLE5)


@pytest.fixture
def bernoulli():
    return make_family([0.5, 0.5], [[0, 1]])


def _random_family(rng, k, d):
    return make_family(rng.dirichlet(np.ones(k + 1)), rng.normal(size=(d, k + 1)))


class TestMakeFamily:

    def test_example5_is_valid(self, example5):
        assert example5.d == 2 and example5.k == 3
        assert example5.offsets.shape == (1, 4)

    def test_constant_statistic_is_rejected(self):
        with pytest.raises(RankError):
            make_family(np.full(4, 0.25), [[1, 1, 1, 1]])
        with pytest.raises(RankError):
            make_family(np.full(4, 0.25), [[1, 2, 3, 4], [2, 3, 4, 5]])

    def test_saturated_has_no_offsets(self):
        spec = make_family(np.full(4, 0.25), np.eye(4)[1:])
        assert spec.offsets.shape[0] == 0

    def test_synthesized_offsets_are_orthogonal(self):
        rng = np.random.default_rng(1)
        stats = rng.normal(size=(2, 7))
        offsets = synthesize_offsets(stats)
        assert offsets.shape == (4, 7)
        assert_allclose(stats @ offsets.T, 0.0, atol=1e-10)
        assert_allclose(offsets.sum(axis=1), 0.0, atol=1e-10)
        assert_allclose(offsets, synthesize_offsets(stats), atol=0)

    def test_non_orthogonal_offsets_are_rejected(self):
        with pytest.raises(OrthogonalityError):
            make_family(np.full(4, 0.25), [[1, 2, 3, 4]], offsets=[[1, -1, 0, 0], [0, 0, 1, -1]])


class TestPoint:

    def test_origin_is_base_point(self, example5):
        assert_allclose(point(example5, [0, 0]).probs, np.full(4, 0.25), rtol=1e-14)

    def test_matches_exponential_geodesic(self):
        base = [0.2, 0.5, 0.3]
        spec = make_family(base, [[1, 2, 3]])
        for theta in (-3.0, 0.4, 7.0):
            assert_allclose(spec.point([theta]).probs, exp_geodesic(base, [1, 2, 3], theta).probs, rtol=1e-13)

    def test_polytope_facet_gives_a_zero(self):
        spec = make_family(np.full(5, 0.2), [[0, 1, 2, 3, 4]])
        b = spec.offsets[0]
        t = np.min(0.2 / -b[b < 0])
        sigma = np.zeros(spec.k - spec.d)
        sigma[0] = t
        probs = spec.point([0.7], sigma).probs
        assert probs.min() <= 1e-15
        assert_allclose(probs.sum(), 1.0)

    def test_outside_polytope_names_bin(self):
        spec = make_family(np.full(5, 0.2), [[0, 1, 2, 3, 4]])
        sigma = np.zeros(3)
        sigma[0] = 10.0
        with pytest.raises(OutsidePolytopeError) as info:
            spec.point([0.0], sigma)
        assert 0 <= info.value.index < 5

    def test_plus_one_parallel(self):
        rng = np.random.default_rng(4)
        spec = make_family(np.full(6, 1 / 6.), rng.normal(size=(2, 6)))
        sig1, sig2 = np.zeros(3), 0.01 * rng.normal(size=3)
        first, second = rng.normal(size=2), rng.normal(size=2)
        diff_a = np.log(spec.point(first, sig1).probs) - np.log(spec.point(first, sig2).probs)
        diff_b = np.log(spec.point(second, sig1).probs) - np.log(spec.point(second, sig2).probs)
        change = diff_a - diff_b
        assert_allclose(change, change[0], atol=1e-12)

    def test_sigma_domain_is_convex(self):
        rng = np.random.default_rng(6)
        spec = make_family(np.full(6, 1 / 6.), [[0, 1, 2, 3, 4, 5]])
        feasible = []
        while len(feasible) < 10:
            sigma = 0.1 * rng.normal(size=4)
            if np.all(spec.base_point.probs + sigma @ spec.offsets >= 0):
                feasible.append(sigma)
        for _ in range(50):
            w = rng.dirichlet(np.ones(len(feasible)))
            spec.shifted_base(w @ np.array(feasible))


class TestMeanMap:

    def test_bernoulli_symmetry(self, bernoulli):
        assert_allclose(mean_map(bernoulli, None, [0.0]), [0.5])

    def test_large_lambda_reaches_maximum(self):
        spec = make_family(np.full(3, 1 / 3.), [[1, 2, 3]])
        assert_allclose(mean_map(spec, None, [50.0]), [3.0], atol=1e-20)

    def test_level_set_through_vertex(self):
        spec = make_family(np.full(3, 1 / 3.), [[1, 2, 3]])
        assert_allclose(spec.statistics @ np.array([0.0, 1.0, 0.0]), [2.0])
        lam = solve_saddlepoint_equation(spec, None, [2.0]).lam
        assert_allclose(lam, [0.0], atol=1e-10)

    def test_jacobian_is_fisher_information(self, example5):
        lam, h = np.array([0.3, -0.2]), 1e-5
        jac = np.column_stack([
            (example5.mean(lam + h * e) - example5.mean(lam - h * e)) / (2 * h) for e in np.eye(2)
        ])
        assert_allclose(jac, example5.fisher_information(lam), atol=1e-6)
        assert_allclose(family_fisher_from_simplex(example5, lam), example5.fisher_information(lam), atol=1e-12)

    def test_monotone_along_one_dimensional_family(self):
        spec = make_family([0.1, 0.2, 0.3, 0.4], [[0, 1, 3, 4]])
        means = [spec.mean([lam])[0] for lam in np.linspace(-5, 5, 41)]
        assert np.all(np.diff(means) > 0)

    def test_level_grid_tracks_conditioning(self):
        spec = make_family([0.25, 0.25, 0.25, 0.25], EXAMPLE5)
        grid = mean_level_grid(spec, [[0.0, 0.0], [3.0, 3.0]])
        assert grid.mean.shape == (2, 2)
        assert grid.condition_number[1] > grid.condition_number[0]


class TestSaddlepointEquation:

    def test_bernoulli(self, bernoulli):
        assert_allclose(solve_saddlepoint_equation(bernoulli, None, [0.5]).lam, [0.0], atol=1e-12)
        assert_allclose(solve_saddlepoint_equation(bernoulli, None, [0.8]).lam, [np.log(4.0)], atol=1e-10)

    def test_example5_round_trip(self, example5):
        target = example5.mean([0.3, -0.2])
        solved = solve_saddlepoint_equation(example5, None, target)
        assert_allclose(solved.lam, [0.3, -0.2], atol=1e-8)
        assert np.max(np.abs(example5.mean(solved.lam) - target)) <= 1e-10

    def test_random_round_trips(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            spec = _random_family(rng, 6, 2)
            lam = rng.normal(size=2)
            solved = solve_saddlepoint_equation(spec, None, spec.mean(lam))
            assert_allclose(solved.lam, lam, atol=1e-8)

    def test_boundary_target_names_face(self):
        spec = make_family(np.full(3, 1 / 3.), [[1, 2, 3]])
        with pytest.raises(NoInteriorSolutionError) as info:
            solve_saddlepoint_equation(spec, None, [3.0])
        assert list(info.value.face) == [2]

    def test_outside_target(self, bernoulli):
        with pytest.raises(NoInteriorSolutionError):
            solve_saddlepoint_equation(bernoulli, None, [1.5])


class TestMixedParameterization:

    def test_extreme_splits(self, example5):
        lam = np.array([0.3, -0.2])
        pi = example5.point(lam).pi
        assert_allclose(mixed_parameterization(example5, pi, 2).coordinates, lam, atol=1e-10)
        assert_allclose(mixed_parameterization(example5, pi, 0).coordinates, example5.mean(lam), atol=1e-12)

    def test_inverse_reproduces_point(self, example5):
        lam = np.array([0.3, -0.2])
        pi = example5.point(lam).pi
        mixed = mixed_parameterization(example5, pi, 1)
        assert_allclose(mixed_to_point(example5, mixed.coordinates, 1).probs, pi.probs, atol=1e-9)

    def test_orthogonal_statistics(self):
        spec = make_family(np.full(4, 0.25), [[1, -1, 1, -1], [1, 1, -1, -1]])
        pi = spec.point([0.0, 0.0]).pi
        assert_allclose(spec.fisher_information([0.0, 0.0]), np.eye(2), atol=1e-12)
        mixed = mixed_parameterization(spec, pi, 1)
        assert_allclose(mixed.coordinates, [0.0, 0.0], atol=1e-12)

    def test_point_outside_family(self, example5):
        with pytest.raises(NotInFamilyError):
            natural_from_point(example5, [0.1, 0.2, 0.3, 0.4])


class TestLogisticEmbedding:

    def test_two_observations(self):
        spec = logistic_embedding(np.ones((2, 1)))
        assert_allclose(spec.statistics, [[0, 1, 1, 2]])
        assert [vertex_label(j, 2) for j in range(4)] == ['00', '10', '01', '11']

    def test_seven_observations(self):
        covariates = np.column_stack([np.ones(7), np.arange(1, 8)])
        spec = logistic_embedding(covariates)
        assert spec.k + 1 == 128 and spec.d == 2
        data = (0, 1, 0, 1, 0, 1, 1)
        assert_allclose(logistic_statistic(covariates, data), [4, 19])
        assert_allclose(spec.statistics[:, vertex_index(data)], [4, 19])
        assert vertex_label(vertex_index(data), 7) == '0101011'

    def test_cap(self):
        with pytest.raises(ValueError):
            logistic_embedding(np.ones((8, 1)), cap=7)


class TestTotalPositivityRank:

    def test_generic_trinomial(self):
        spec = make_family(np.full(3, 1 / 3.), [[0, 1, 2]])
        assert total_positivity_rank(spec, [-1.0, 0.0, 1.0]).rank == 2

    def test_repeated_statistic(self):
        spec = make_family(np.full(3, 1 / 3.), [[1, 1, 2]])
        report = total_positivity_rank(spec, [-1.0, 0.0, 1.0])
        assert report.rank <= 1
        assert not report.generic

    def test_random_generic(self):
        rng = np.random.default_rng(9)
        spec = make_family(rng.dirichlet(np.ones(5)), [rng.permutation(5) * 0.5])
        assert total_positivity_rank(spec, [-1.0, -0.5, 0.0, 0.5, 1.0]).rank == 4
