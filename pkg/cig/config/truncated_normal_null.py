from __future__ import division
from __future__ import print_function
from __future__ import absolute_import


class TruncatedNormalNullConfigModule:
    """θ equal to θ₀: every likelihood-ratio discrepancy vanishes."""
    SUBCOMMAND = "discretize"
    FAMILY = "truncated_normal"
    FAMILY_PARAMS = dict(lower=-5.0, upper=5.0)
    N_BINS = 20
    THETA = 0.0
    THETA0 = 0.0
    THETA_GRID = [0.0]
    LEVELS = 1
    N_OBS = 50
    SEED = 7


CONFIG_MODULE = TruncatedNormalNullConfigModule
