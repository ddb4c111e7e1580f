from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
import pandas as pd
from dotmap import DotMap

from cig.controllers.Controller import Controller
from cig.misc import logger
from cig.misc.DotmapUtils import get_required_argument
from cig.misc.io_util import read_observations_csv
from cig.modeling.discretizer import (
    partition_for, likelihood_discrepancy, mle_discrepancy, geometry_discrepancy, refinement_study
)
from cig.modeling.families import make_continuous_family


def build_family(params):
    name = get_required_argument(params, 'family', "Must provide a continuous family.")
    return make_continuous_family(name, **params.get('family_params', DotMap()).toDict())


def load_observations(controller, family, theta):
    """Observations from the input CSV, the preset, or a seeded sample at θ."""
    if controller._exp.get('input', None):
        return read_observations_csv(controller._exp.input)
    if controller._params.get('data', None) is not None:
        return np.asarray(controller._params.data, dtype=float)
    if theta is None:
        raise ValueError("Must provide observations or a θ to sample them at.")
    logger.info("Sampling %d observations at θ = %g." % (controller._params.n_obs, theta))
    return family.sample(controller._rng(), controller._params.n_obs, theta)


class DiscretizeController(Controller):
    """Discrete versus continuous likelihood, MLE and geometry for one partition, and
    their behaviour under dyadic refinement."""

    def run(self):
        params, tol = self._params, self._tol
        family = build_family(params)
        partition = partition_for(family, n_bins=params.get('n_bins', None), width=params.get('width', None))
        data = load_observations(self, family, params.get('theta0', None))

        mle = mle_discrepancy(family, partition, data)
        n_obs = family.transform_data(data).size
        se = 1.0 / np.sqrt(n_obs * mle.info_c)
        theta0 = mle.theta_c if params.get('theta0', None) is None else params.theta0
        theta = mle.theta_c if params.get('theta', None) is None else params.theta

        grid = params.get('theta_grid', None)
        if grid is None:
            grid = self._grid(family, mle.theta_c, se, params.grid_size)
        grid = np.asarray(grid, dtype=float)
        lik = likelihood_discrepancy(family, partition, data, grid, theta0)
        curve_range = float(np.ptp(lik.continuous)) if grid.size > 1 else 0.0

        reference = None if theta0 == theta else theta0
        geometry = geometry_discrepancy(family, partition, theta, labels=params.labels, reference_theta=reference)
        study = refinement_study(family, partition, theta, levels=params.levels, reference_theta=reference,
                                 theta_grid=grid[::max(1, grid.size // 5)], theta0=theta0, n_obs=n_obs)

        summary = dict(
            family=family.name, partition=dict(n_bins=partition.n_bins, max_width=partition.max_width,
                                               atoms=list(partition.atoms)),
            n_obs=n_obs, theta=theta, theta0=theta0,
            mle=mle.toDict(), standard_error=se, mle_gap_in_se=mle.gap / se,
            likelihood=dict(sup=lik.sup, argmax=lik.argmax, curve_range=curve_range,
                            relative=lik.sup / curve_range if curve_range > 0 else 0.0),
            geometry=geometry.toDict(), slopes=study.slopes, quadrature_tol=tol.quadrature,
        )
        if hasattr(family, 'mean_lifetime'):
            se_mu = se / mle.theta_c ** 2
            summary['mean_lifetime'] = dict(mu_c=mle.mu_c, mu_d=mle.mu_d, se=se_mu,
                                            gap_in_se=abs(mle.mu_d - mle.mu_c) / se_mu)

        curves = pd.DataFrame(dict(theta=grid, discrete=lik.discrete, continuous=lik.continuous,
                                   difference=lik.discrete - lik.continuous))
        if hasattr(family, 'mean_lifetime'):
            curves.insert(1, 'mu', family.mean_lifetime(grid))
        return DotMap(summary=summary, tables=dict(likelihood=curves, refinement=study.table))

    @staticmethod
    def _grid(family, center, se, size):
        if hasattr(family, 'mean_lifetime'):
            mu, se_mu = 1.0 / center, se / center ** 2
            return np.sort(1.0 / np.linspace(mu - 3.0 * se_mu, mu + 3.0 * se_mu, size))
        return np.linspace(center - 3.0 * se, center + 3.0 * se, size)
