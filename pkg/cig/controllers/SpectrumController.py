from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np
import pandas as pd
from dotmap import DotMap

from cig.controllers.Controller import Controller
from cig.geometry.fisher_spectrum import spectral_decomposition, condition_report
from cig.misc.DotmapUtils import get_required_argument


class SpectrumController(Controller):

    def _array_key(self):
        return 'pi'

    def run(self):
        self._json_input()
        pi = self._probability(get_required_argument(self._params, 'pi', "Must provide a probability vector."))
        decomposition = spectral_decomposition(pi, group_tol=self._tol.group)
        report = condition_report(pi, near_replicate_tol=self._params.near_replicate_tol, group_tol=self._tol.group)

        values = decomposition.eigenvalues()
        with np.errstate(divide='ignore'):
            table = pd.DataFrame(dict(order=np.arange(1, values.size + 1), eigenvalue=values,
                                      log10_eigenvalue=np.log10(values)))
        summary = dict(
            spectrum=decomposition.to_dict(),
            interlaces=decomposition.interlaces(),
            singular=report.singular,
            rank=report.rank,
            condition_number=report.condition_number,
            near_replicate_pairs=report.near_replicate_pairs,
        )
        return DotMap(summary=summary, tables=dict(eigenvalues=table))
