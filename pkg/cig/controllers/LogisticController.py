from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
import pandas as pd
from dotmap import DotMap

from cig.controllers.Controller import Controller
from cig.geometry.boundary import reachable_vertices
from cig.misc.DotmapUtils import get_required_argument
from cig.modeling.expfam import logistic_embedding, logistic_statistic, vertex_index, vertex_label


class LogisticController(Controller):
    """Embeds a logistic design into the simplex over all response sequences."""

    def run(self):
        self._json_input()
        params = self._params
        covariates = np.asarray(get_required_argument(params, 'covariates', "Must provide a design matrix."),
                                dtype=float)
        if covariates.ndim == 1:
            covariates = covariates[:, None]
        spec = logistic_embedding(covariates, cap=params.cap)
        n_obs, n_cov = covariates.shape

        reach = reachable_vertices(spec)
        responses = []
        for response in params.get('responses', []) or []:
            j = vertex_index(response)
            responses.append(dict(response=list(response), vertex=j, label=vertex_label(j, n_obs),
                                  statistic=logistic_statistic(covariates, response).tolist()))

        summary = dict(n_obs=n_obs, n_covariates=n_cov, n_vertices=spec.k + 1,
                       reachable=[vertex_label(j, n_obs) for j in reach.reachable],
                       n_reachable=len(reach.reachable), responses=responses)
        vertices = np.arange(spec.k + 1)
        table = pd.DataFrame(dict(vertex=vertices, label=[vertex_label(int(j), n_obs) for j in vertices]))
        for i in range(n_cov):
            table['v%d' % i] = spec.statistics[i]
        table['reachable'] = np.isin(vertices, reach.reachable)
        return DotMap(summary=summary, tables=dict(embedding=table))
