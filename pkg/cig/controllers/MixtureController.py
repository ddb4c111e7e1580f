from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
import pandas as pd
from dotmap import DotMap

from cig.controllers.Controller import Controller
from cig.geometry.simplex import CountVector, normalize_counts
from cig.misc import logger
from cig.misc.DotmapUtils import get_required_argument
from cig.misc.io_util import read_counts_csv
from cig.modeling.mixture import binomial_curve, npmle


class MixtureController(Controller):
    """NPMLE of a binomial mixture from observed or simulated counts."""

    def run(self):
        params = self._params
        n_trials = get_required_argument(params, 'n_trials', "Must provide the number of binomial trials.")
        counts = CountVector(self._counts(n_trials))
        curve = binomial_curve(n_trials)

        fit = npmle(counts, curve, eps_target=self._tol.eps, dd_tol=self._tol.dd * counts.total,
                    prune_tol=self._tol.prune)
        summary = fit.to_dict()
        summary['counts'] = counts.counts.tolist()
        summary['empirical'] = normalize_counts(counts).probs.tolist()

        tables = dict(
            support=pd.DataFrame(dict(theta=fit.support, weight=fit.weights)),
            fitted=pd.DataFrame(dict(bin=np.arange(curve.n_bins), observed=counts.counts,
                                     fitted=counts.total * fit.fitted.probs)),
            dd_curve=pd.DataFrame(dict(theta=fit.dd_curve.theta, dd=fit.dd_curve.dd)),
        )
        return DotMap(summary=summary, tables=tables)

    def _counts(self, n_trials):
        if self._exp.get('input', None):
            return read_counts_csv(self._exp.input)
        if self._params.get('counts', None) is not None:
            return np.asarray(self._params.counts, dtype=int)
        simulation = get_required_argument(self._params, 'simulation', "Must provide counts or a simulation.")
        rng = self._rng()
        probs = rng.choice(simulation.support, size=self._params.n_obs, p=simulation.weights)
        draws = rng.binomial(n_trials, probs)
        logger.info("Simulated %d binomial draws with seed %d." % (self._params.n_obs, self._exp.seed))
        return np.bincount(draws, minlength=n_trials + 1)
