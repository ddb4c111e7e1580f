from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np

from cig.geometry.simplex import ProbabilityVector
from cig.misc.DotmapUtils import get_required_argument
from cig.misc.io_util import read_json
from cig.modeling.expfam import ExpFamilySpec


class Controller:
    """One subcommand: reads its section of the configuration, runs the computation and
    returns a DotMap with .summary (JSON-ready) and .tables (name -> pandas.DataFrame).

    Arguments:
        params (DotMap): the subcommand section, e.g. cfg.spectrum_cfg.
        tol_cfg (DotMap): the tolerances.
        exp_cfg (DotMap): input/output paths and the seed.
    """

    def __init__(self, params, tol_cfg, exp_cfg):
        self._params = params
        self._tol = tol_cfg
        self._exp = exp_cfg

    def run(self):
        """Runs the subcommand.
        """
        raise NotImplementedError("Must be implemented in subclass.")

    def _json_input(self):
        """Entries of the JSON input file laid over the preset section."""
        if not self._exp.get('input', None):
            return
        data = read_json(self._exp.input)
        if not isinstance(data, dict):
            data = {self._array_key(): data}
        for key, value in data.items():
            if key not in self._params:
                raise ValueError("Unknown input field '%s'." % key)
            self._params[key] = value

    def _array_key(self):
        raise ValueError("The input file must be a JSON object.")

    def _probability(self, values):
        return ProbabilityVector(
            values, zero_threshold=self._tol.zero_threshold, tol=self._tol.prob_sum,
            renormalize_tol=self._tol.renormalize
        )

    def _family_spec(self):
        base = get_required_argument(self._params, 'base_point', "Must provide a base point.")
        stats = get_required_argument(self._params, 'statistics', "Must provide sufficient statistics.")
        offsets = self._params.get('offsets', None)
        return ExpFamilySpec(
            self._probability(base), np.atleast_2d(np.asarray(stats, dtype=float)),
            None if offsets is None else np.atleast_2d(np.asarray(offsets, dtype=float)),
            rank_tol=self._tol.rank, orthogonality_tol=self._tol.orthogonality,
        )

    def _rng(self):
        return np.random.default_rng(self._exp.seed)
