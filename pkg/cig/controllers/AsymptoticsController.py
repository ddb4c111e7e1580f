from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
import pandas as pd
from dotmap import DotMap

from cig.controllers.Controller import Controller
from cig.controllers.DiscretizeController import build_family, load_observations
from cig.misc.DotmapUtils import get_required_argument
from cig.modeling.asymptotics import (
    cumulants, edgeworth_density, exact_mean_distribution, saddlepoint_density,
    curved_saddlepoint_density, monte_carlo_mle
)
from cig.modeling.discretizer import partition_for


def _integer_valued(spec):
    return spec.d == 1 and np.allclose(spec.statistics, np.round(spec.statistics))


class EdgeworthController(Controller):
    """Edgeworth density of the standardised mean statistic, with the exact law when the
    statistic is integer valued."""

    def run(self):
        self._json_input()
        params = self._params
        spec = self._family_spec()
        lam_true = get_required_argument(params, 'lam_true', "Must provide the true natural parameter.")
        n_obs = params.n_obs

        axis = np.linspace(params.z_min, params.z_max, params.z_size)
        if spec.d == 1:
            z = axis[:, None]
        else:
            mesh = np.meshgrid(*([axis] * spec.d), indexing='ij')
            z = np.column_stack([m.reshape(-1) for m in mesh])
        result = edgeworth_density(spec, None, lam_true, n_obs, z, order=params.order,
                                   ill_conditioned=self._tol.ill_conditioned)

        table = pd.DataFrame({'z%d' % (i + 1): z[:, i] for i in range(spec.d)})
        table['edgeworth'] = result.density
        table['normal'] = result.normal
        cum = cumulants(spec, None, lam_true, order=3)
        summary = dict(
            n_obs=n_obs, order=params.order, mean=cum.mean.tolist(), covariance=cum.covariance.tolist(),
            standardized_skewness=result.skewness.tolist(),
            max_correction=float(np.max(np.abs(result.density - result.normal))),
        )
        tables = dict(density=table)
        if _integer_valued(spec):
            exact = exact_mean_distribution(spec, None, lam_true, n_obs)
            sd = np.sqrt(cum.covariance[0, 0])
            z_exact = np.sqrt(n_obs) * (exact.mean_values - cum.mean[0]) / sd
            # lattice cells of width 1/N on the mean scale
            density = exact.probs * np.sqrt(n_obs) * sd
            at = edgeworth_density(spec, None, lam_true, n_obs, z_exact[:, None], order=params.order)
            tables['exact'] = pd.DataFrame(dict(z=z_exact, exact=density, edgeworth=at.density, normal=at.normal))
            summary['sup_error_edgeworth'] = float(np.max(np.abs(at.density - density)))
            summary['sup_error_normal'] = float(np.max(np.abs(at.normal - density)))
        return DotMap(summary=summary, tables=tables)


class SaddlepointController(Controller):
    """Saddlepoint density of the mean statistic, or of the mean-lifetime MLE for the
    censored exponential checked against seeded Monte Carlo."""

    def run(self):
        self._json_input()
        if self._params.get('family', None):
            return self._run_curved()
        params = self._params
        spec = self._family_spec()
        lam_true = get_required_argument(params, 'lam_true', "Must provide the true natural parameter.")
        n_obs = params.n_obs

        exact = None
        if _integer_valued(spec):
            exact = exact_mean_distribution(spec, None, lam_true, n_obs)
            grid, cell = exact.mean_values, 1.0 / n_obs
        elif spec.d == 1:
            lo, hi = spec.statistics.min(), spec.statistics.max()
            grid = np.linspace(lo, hi, params.grid_size + 2)[1:-1]
            cell = grid[1] - grid[0]
        else:
            raise ValueError("Saddlepoint grids are built for 1-dimensional families only.")

        result = saddlepoint_density(spec, None, lam_true, n_obs, grid, renormalize=params.renormalize,
                                     cell_volume=cell, tol=self._tol.newton)
        table = pd.DataFrame(dict(tbar=grid, saddlepoint=result.density))
        summary = dict(n_obs=n_obs, n_points=int(grid.size), n_errors=len(result.errors),
                       errors=result.errors, normalizer=result.get('normalizer', None))
        if exact is not None:
            table['exact'] = exact.probs / cell
            approx = np.nan_to_num(result.density) * cell
            summary['total_variation'] = float(0.5 * np.sum(np.abs(approx / approx.sum() - exact.probs)))
            center = int(np.argmin(np.abs(grid - spec.mean(lam_true))))
            summary['center'] = dict(tbar=float(grid[center]), saddlepoint=float(result.density[center]),
                                     exact=float(exact.probs[center] / cell))
        return DotMap(summary=summary, tables=dict(density=table))

    def _run_curved(self):
        params = self._params
        family = build_family(params)
        partition = partition_for(family, n_bins=params.get('n_bins', None), width=params.get('width', None))
        data = load_observations(self, family, None)
        theta_hat = family.continuous_mle(data)
        n_obs = family.transform_data(data).size
        uncensored = int(np.sum(family.transform_data(data) < family.censor_time))
        mu_hat = family.mean_lifetime(theta_hat)
        se = mu_hat / np.sqrt(uncensored)

        mu = np.linspace(max(mu_hat - 4.0 * se, 0.05 * mu_hat), mu_hat + 4.0 * se, params.grid_size)
        approx = curved_saddlepoint_density(family, partition, theta_hat, n_obs, mu)
        mc = monte_carlo_mle(family, theta_hat, n_obs, params.n_rep, self._exp.seed)
        step = mu[1] - mu[0]
        edges = np.append(mu - 0.5 * step, mu[-1] + 0.5 * step)
        counts, _ = np.histogram(mc.mu_hat, bins=edges)
        mc_density = counts / (max(mc.mu_hat.size, 1) * step)

        summary = dict(n_obs=n_obs, theta_hat=theta_hat, mu_hat=mu_hat, se=se, n_rep=params.n_rep,
                       skipped=mc.skipped, projection=approx.projection, n_errors=len(approx.errors),
                       saddlepoint_mass=float(np.nansum(approx.density) * step),
                       monte_carlo_mass=float(counts.sum() / max(mc.mu_hat.size, 1)))
        table = pd.DataFrame(dict(mu=mu, saddlepoint=approx.density, monte_carlo=mc_density))
        return DotMap(summary=summary, tables=dict(density=table))
