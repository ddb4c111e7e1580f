import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import norm

from cig.config.default import load_preset
from cig.misc.errors import InvalidInputError, RankError, DimensionMismatchError
from cig.modeling.asymptotics import (
    cumulants, hermite_contraction, edgeworth_density, exact_mean_distribution, saddlepoint_density,
    curved_saddlepoint_density, monte_carlo_mle
)
from cig.modeling.discretizer import partition_for
from cig.modeling.expfam import make_family
from cig.modeling.families import make_continuous_family


@pytest.fixture
def bernoulli():
    return make_family([0.5, 0.5], [[0, 1]])


@pytest.fixture
def skewed():
    # statistic 0..3, heavily weighted towards 0 at λ = -1
    return make_family(np.full(4, 0.25), [[0, 1, 2, 3]])


def _lattice_check(spec, lam, n_obs):
    """Total variation between the renormalised saddlepoint and the exact law of the mean."""
    exact = exact_mean_distribution(spec, None, lam, n_obs)
    interior = exact.mean_values[1:-1]
    sp = saddlepoint_density(spec, None, lam, n_obs, interior, renormalize=True, cell_volume=1.0 / n_obs)
    approx = np.zeros_like(exact.probs)
    approx[1:-1] = sp.density / n_obs
    return 0.5 * np.sum(np.abs(approx - exact.probs))


class TestCumulants:

    def test_symmetric_bernoulli(self, bernoulli):
        cum = cumulants(bernoulli, None, [0.0], order=4)
        assert_allclose(cum.mean, [0.5])
        assert_allclose(cum.covariance, [[0.25]])
        assert_allclose(cum.skewness, np.zeros((1, 1, 1)), atol=1e-17)
        # κ₄ = p(1-p)(1-6p(1-p))
        assert_allclose(cum.kurtosis.reshape(-1), [-0.125])

    def test_skewed_bernoulli(self, bernoulli):
        cum = cumulants(bernoulli, None, [np.log(4.0)])
        assert_allclose(cum.skewness.reshape(-1), [-0.096], rtol=1e-12)
        assert cum.kurtosis is None

    def test_covariance_is_fisher_information(self):
        rng = np.random.default_rng(0)
        spec = make_family(rng.dirichlet(np.ones(6)), rng.normal(size=(2, 6)))
        lam = np.array([0.4, -0.7])
        assert_allclose(cumulants(spec, None, lam).covariance, spec.fisher_information(lam), atol=1e-10)

    def test_covariance_matches_log_normalizer_curvature(self):
        spec = make_family([0.1, 0.2, 0.3, 0.4], [[1, 2, 3, 4], [1, 4, 9, -1]])
        lam, h = np.array([0.1, 0.05]), 1e-4
        hessian = np.empty((2, 2))
        for i, ei in enumerate(np.eye(2)):
            for j, ej in enumerate(np.eye(2)):
                hessian[i, j] = (spec.log_normalizer(lam + h * ei + h * ej) - spec.log_normalizer(lam + h * ei - h * ej)
                                 - spec.log_normalizer(lam - h * ei + h * ej)
                                 + spec.log_normalizer(lam - h * ei - h * ej)) / (4 * h * h)
        assert_allclose(cumulants(spec, None, lam).covariance, hessian, atol=1e-6)

    def test_bad_order(self, bernoulli):
        with pytest.raises(InvalidInputError):
            cumulants(bernoulli, None, [0.0], order=5)


class TestHermite:

    def test_third_order(self):
        assert_allclose(hermite_contraction(np.ones((1, 1, 1)), [[2.0]]), [8.0 - 6.0])

    def test_fourth_order(self):
        z = np.array([[0.0], [1.0], [2.0]])
        assert_allclose(hermite_contraction(np.ones((1, 1, 1, 1)), z), (z ** 4 - 6 * z ** 2 + 3).reshape(-1))

    def test_two_dimensional_second_order(self):
        # h_ij = z_i z_j - δ_ij, contracted with the identity: |z|² - 2
        z = np.array([[1.0, 2.0], [0.5, -0.5]])
        assert_allclose(hermite_contraction(np.eye(2), z), np.sum(z ** 2, axis=1) - 2.0)

    def test_even_order_constant_term(self):
        # h4 at zero is the number of perfect matchings, 3
        assert_allclose(hermite_contraction(np.ones((1, 1, 1, 1)), [[0.0], [0.5]]),
                        [3.0, 0.5 ** 4 - 6 * 0.5 ** 2 + 3])

    def test_two_dimensional_fourth_order(self):
        # K_ijkl = δ_ij δ_kl gives |z|⁴ - 2(d+2)|z|² + d(d+2) with d = 2
        z = np.array([[0.0, 0.0], [1.0, 2.0], [0.5, -0.5]])
        r2 = np.sum(z ** 2, axis=1)
        tensor = np.einsum('ij,kl->ijkl', np.eye(2), np.eye(2))
        assert_allclose(hermite_contraction(tensor, z), r2 ** 2 - 8 * r2 + 8, atol=1e-12)

    def test_sixth_order(self):
        z = np.array([[0.0], [1.5]])
        expected = z ** 6 - 15 * z ** 4 + 45 * z ** 2 - 15
        assert_allclose(hermite_contraction(np.ones((1,) * 6), z), expected.reshape(-1), atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            hermite_contraction(np.ones((2, 2, 2)), [[1.0, 2.0, 3.0]])


class TestEdgeworth:

    def test_symmetric_correction_vanishes(self, bernoulli):
        z = np.linspace(-3, 3, 13)
        result = edgeworth_density(bernoulli, None, [0.0], 20, z)
        assert_allclose(result.density, norm.pdf(z), rtol=0, atol=1e-15)

    def test_beats_normal_against_exact(self, skewed):
        n_obs, lam = 20, [-1.0]
        cum = cumulants(skewed, None, lam)
        sd = np.sqrt(cum.covariance[0, 0])
        exact = exact_mean_distribution(skewed, None, lam, n_obs)
        z = np.sqrt(n_obs) * (exact.mean_values - cum.mean[0]) / sd
        exact_density = exact.probs * np.sqrt(n_obs) * sd
        result = edgeworth_density(skewed, None, lam, n_obs, z)
        assert np.max(np.abs(result.density - exact_density)) < np.max(np.abs(result.normal - exact_density))

    def test_integrates_to_one(self, skewed):
        z = np.linspace(-8, 8, 1601)
        density = edgeworth_density(skewed, None, [-1.0], 20, z).density
        assert abs(np.trapz(density, z) - 1.0) < 5e-3

    def test_second_order_term(self, skewed):
        z = np.linspace(-3, 3, 7)
        first = edgeworth_density(skewed, None, [-1.0], 20, z)
        second = edgeworth_density(skewed, None, [-1.0], 20, z, order=2)
        assert second.kurtosis is not None
        assert np.max(np.abs(second.density - first.density)) > 0
        with pytest.raises(InvalidInputError):
            edgeworth_density(skewed, None, [-1.0], 20, z, order=3)

    def test_second_order_integrates_to_one(self):
        spec = make_family(np.full(4, 0.25), [[0, 1, 2, 5]])
        z = np.linspace(-8, 8, 1601)
        result = edgeworth_density(spec, None, [0.3], 20, z, order=2)
        assert np.all(np.isfinite(result.density))
        assert abs(np.trapz(result.density, z) - 1.0) < 5e-3

    def test_two_dimensional_second_order(self):
        spec = make_family(np.full(4, 0.25), [[1, 2, 3, 4], [1, 4, 9, -1]])
        z = np.array([[0.0, 0.0], [1.0, -1.0], [2.0, 0.5]])
        result = edgeworth_density(spec, None, [0.0, 0.0], 50, z, order=2)
        assert result.density.shape == (3,)
        assert result.kurtosis.shape == (2, 2, 2, 2)

    def test_two_dimensional(self):
        spec = make_family(np.full(4, 0.25), [[1, 2, 3, 4], [1, 4, 9, -1]])
        z = np.array([[0.0, 0.0], [1.0, -1.0], [2.0, 0.5]])
        result = edgeworth_density(spec, None, [0.0, 0.0], 50, z)
        assert result.density.shape == (3,)
        assert_allclose(result.normal, np.exp(-0.5 * np.sum(z ** 2, axis=1)) / (2 * np.pi))

    def test_affine_statistic_leaves_standardised_density(self, skewed):
        shifted = make_family(np.full(4, 0.25), [[1, 3, 5, 7]])
        z = np.linspace(-3, 3, 9)
        first = edgeworth_density(skewed, None, [-1.0], 20, z).density
        second = edgeworth_density(shifted, None, [-0.5], 20, z).density
        assert_allclose(first, second, rtol=1e-10)

    def test_singular_covariance(self, bernoulli):
        with pytest.raises(RankError):
            edgeworth_density(bernoulli, None, [800.0], 20, [0.0])


class TestExactMeanDistribution:

    def test_binomial(self, bernoulli):
        exact = exact_mean_distribution(bernoulli, None, [0.0], 10)
        assert_allclose(exact.mean_values, np.arange(11) / 10.0)
        assert_allclose(exact.probs[5], 252 / 1024.)
        assert_allclose(exact.probs.sum(), 1.0)

    def test_needs_integer_statistic(self):
        with pytest.raises(InvalidInputError):
            exact_mean_distribution(make_family([0.5, 0.5], [[0, 0.5]]), None, [0.0], 3)


class TestSaddlepoint:

    def test_bernoulli_centre(self, bernoulli):
        result = saddlepoint_density(bernoulli, None, [0.0], 10, [0.5])
        assert_allclose(result.density, [2.0 * np.sqrt(10 / (2 * np.pi))], rtol=1e-10)
        assert_allclose(result.density[0], 2.523, atol=1e-3)
        # lattice-normalised exact value
        assert abs(result.density[0] / (252 / 1024. / 0.1) - 1.0) < 0.03

    def test_total_variation_against_exact(self, bernoulli):
        assert _lattice_check(bernoulli, [0.0], 10) <= 0.02
        assert _lattice_check(bernoulli, [np.log(0.3 / 0.7)], 12) <= 0.02
        trinomial = make_family([0.2, 0.5, 0.3], [[0, 1, 2]])
        assert _lattice_check(trinomial, [0.3], 8) <= 0.02
        seven_bins = make_family(np.full(7, 1 / 7.), [[0, 1, 2, 3, 4, 5, 6]])
        assert _lattice_check(seven_bins, [-0.4], 6) <= 0.02

    def test_points_outside_are_reported(self, bernoulli):
        result = saddlepoint_density(bernoulli, None, [0.0], 10, [0.2, 1.5, 0.5, 1.0])
        assert [i for i, _ in result.errors] == [1, 3]
        assert np.isnan(result.density[1]) and np.isnan(result.density[3])
        assert np.all(np.isfinite(result.density[[0, 2]]))

    def test_renormalize_needs_cell_volume_in_two_dimensions(self):
        spec = make_family(np.full(4, 0.25), [[1, 2, 3, 4], [1, 4, 9, -1]])
        target = spec.mean([0.1, 0.1])
        with pytest.raises(InvalidInputError):
            saddlepoint_density(spec, None, [0.0, 0.0], 10, [target], renormalize=True)

    def test_affine_statistic_scales_density(self, skewed):
        shifted = make_family(np.full(4, 0.25), [[1, 3, 5, 7]])
        grid = np.linspace(0.3, 1.5, 7)
        first = saddlepoint_density(skewed, None, [-1.0], 10, grid).density
        second = saddlepoint_density(shifted, None, [-0.5], 10, 2 * grid + 1).density
        assert_allclose(second, first / 2.0, rtol=1e-8)

    def test_parameter_density_uses_jacobian(self, bernoulli):
        grid = np.array([0.3, 0.5, 0.7])
        result = saddlepoint_density(bernoulli, None, [0.0], 10, grid,
                                     jacobian=lambda tbar, lam: tbar[0] * (1 - tbar[0]))
        assert_allclose(result.parameter_density, result.density * grid * (1 - grid))

    def test_fine_binned_normal_is_gaussian_up_to_a_constant(self):
        family = make_continuous_family('truncated_normal', lower=-5.0, upper=5.0)
        partition = partition_for(family, n_bins=81)
        spec = make_family(load_preset('discretized_normal').PI, [partition.labels])
        variance = cumulants(spec, None, [0.0]).covariance[0, 0]
        grid = np.linspace(-0.4, 0.4, 9)
        density = saddlepoint_density(spec, None, [0.0], 10, grid).density
        ratio = density / norm.pdf(grid, scale=np.sqrt(variance / 10))
        assert_allclose(ratio, ratio[0], rtol=1e-4)


class TestCurvedFamily:

    @pytest.fixture(scope='class')
    def setup(self):
        family = make_continuous_family('censored_exponential', censor_time=750.0)
        data = np.asarray(load_preset('censored_exponential').DATA, dtype=float)
        return family, partition_for(family, width=4.0), family.continuous_mle(data)

    def test_projection_metadata(self, setup):
        family, partition, theta_hat = setup
        mu_hat = 1.0 / theta_hat
        result = curved_saddlepoint_density(family, partition, theta_hat, 43, [0.8 * mu_hat, mu_hat, 1.2 * mu_hat])
        assert result.projection['scale'] == 'mean_lifetime'
        assert_allclose(result.projection['direction'], family.tangent(theta_hat))
        assert result.errors == []
        assert np.argmax(result.density) == 1

    def test_rejects_non_positive_mean(self, setup):
        family, partition, theta_hat = setup
        with pytest.raises(InvalidInputError):
            curved_saddlepoint_density(family, partition, theta_hat, 43, [0.0, 100.0])

    @pytest.mark.slow
    def test_matches_monte_carlo(self, setup):
        family, partition, theta_hat = setup
        mu_hat = 1.0 / theta_hat
        se = mu_hat / np.sqrt(23)
        mu_grid = np.linspace(mu_hat - 4 * se, mu_hat + 4 * se, 81)
        result = curved_saddlepoint_density(family, partition, theta_hat, 43, mu_grid)
        assert abs(np.trapz(result.density, mu_grid) - 1.0) < 0.1

        mc = monte_carlo_mle(family, theta_hat, 43, 2000, seed=43)
        assert mc.skipped == 0
        inside = (mc.mu_hat > mu_grid[0]) & (mc.mu_hat < mu_grid[-1])
        assert inside.mean() > 0.95
        # the approximate and simulated medians agree to a fraction of a standard error
        cdf = np.cumsum(result.density) * (mu_grid[1] - mu_grid[0])
        median = mu_grid[np.searchsorted(cdf / cdf[-1], 0.5)]
        assert abs(median - np.median(mc.mu_hat)) < 0.5 * se


class TestMonteCarlo:

    def test_seeded(self):
        family = make_continuous_family('censored_exponential', censor_time=750.0)
        first = monte_carlo_mle(family, 0.002, 43, 20, seed=1)
        second = monte_carlo_mle(family, 0.002, 43, 20, seed=1)
        assert_allclose(first.theta_hat, second.theta_hat)
        assert_allclose(first.mu_hat, 1.0 / first.theta_hat)

    def test_skips_replicates_without_estimate(self):
        # a tiny rate and a short censoring window: most samples are fully censored
        family = make_continuous_family('censored_exponential', censor_time=1.0)
        result = monte_carlo_mle(family, 1e-4, 2, 50, seed=0)
        assert result.skipped > 0
        assert result.theta_hat.size + result.skipped == 50
