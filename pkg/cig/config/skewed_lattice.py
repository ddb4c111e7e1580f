from __future__ import division
from __future__ import print_function
from __future__ import absolute_import


class SkewedLatticeConfigModule:
    """Statistic 0..3 tilted towards 0; the mean of twenty draws is visibly skewed."""
    SUBCOMMAND = "edgeworth"
    BASE_POINT = [0.25, 0.25, 0.25, 0.25]
    STATISTICS = [[0.0, 1.0, 2.0, 3.0]]
    LAM_TRUE = [-1.0]
    N_OBS = 20


CONFIG_MODULE = SkewedLatticeConfigModule
