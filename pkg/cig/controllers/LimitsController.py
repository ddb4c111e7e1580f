from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
import pandas as pd
from dotmap import DotMap

from cig.controllers.Controller import Controller
from cig.geometry.boundary import LinePencil, envelope_1d, reachable_vertices, mle_exists
from cig.misc import logger
from cig.modeling.expfam import (
    logistic_embedding, solve_saddlepoint_equation, vertex_index, vertex_label
)


class LimitsController(Controller):
    """Reachable vertices, line envelopes and MLE existence for a family, or for the
    logistic embedding when covariates are given."""

    def run(self):
        self._json_input()
        params = self._params
        spec, count_vectors, labels = self._build()
        sigma = params.get('sigma', None)

        reach = reachable_vertices(spec, sigma, cap=params.cap)
        summary = dict(
            reachable=reach.reachable,
            n_reachable=len(reach.reachable),
            redundant=reach.redundant,
            dimension=reach.dimension,
            limit_supports=reach.limit_supports,
        )
        if labels is not None:
            summary['reachable_labels'] = [labels(j) for j in reach.reachable]

        pencil = params.get('pencil', None)
        if pencil:
            summary['envelope'] = envelope_1d(LinePencil(pencil['slopes'], pencil['intercepts'])).toDict()

        summary['mle'] = [self._existence(spec, counts, sigma, labels) for counts in count_vectors]

        reachable = set(reach.reachable)
        bins = np.arange(spec.k + 1)
        table = pd.DataFrame(dict(bin=bins, reachable=[int(b) in reachable for b in bins]))
        if labels is not None:
            table['label'] = [labels(int(b)) for b in bins]
        return DotMap(summary=summary, tables=dict(vertices=table))

    def _build(self):
        params = self._params
        if params.get('covariates', None) is not None:
            covariates = np.asarray(params.covariates, dtype=float)
            spec = logistic_embedding(covariates, cap=min(params.cap, 20))
            n_obs = covariates.shape[0]
            count_vectors = []
            for response in params.get('responses', []) or []:
                counts = np.zeros(spec.k + 1, dtype=int)
                counts[vertex_index(response)] = 1
                count_vectors.append(counts)
            return spec, count_vectors, lambda j: vertex_label(j, n_obs)

        spec = self._family_spec()
        counts = params.get('counts', None)
        if counts is None:
            count_vectors = []
        elif np.ndim(counts) == 1:
            count_vectors = [np.asarray(counts, dtype=int)]
        else:
            count_vectors = [np.asarray(c, dtype=int) for c in counts]
        return spec, count_vectors, None

    def _existence(self, spec, counts, sigma, labels):
        report = mle_exists(spec, counts, sigma)
        entry = dict(counts=counts.tolist(), exists=report.exists, face=report.face, margin=report.margin,
                     mean_statistic=report.mean_statistic.tolist(), reduced_dimension=report.reduced_dimension)
        if labels is not None:
            entry['face_labels'] = [labels(j) for j in report.face]
        if report.exists:
            solved = solve_saddlepoint_equation(spec, sigma, report.mean_statistic, tol=self._tol.newton,
                                                ill_conditioned=self._tol.ill_conditioned)
            entry.update(lam=solved.lam.tolist(), residual=solved.residual, iterations=solved.iterations,
                         condition_number=solved.condition_number, diagnostics=solved.diagnostics)
        else:
            logger.info("No interior MLE for counts %s; boundary face %s." % (counts.tolist(), report.face))
        return entry
