from __future__ import division
from __future__ import print_function
from __future__ import absolute_import


class TruncatedNormalConfigModule:
    """Unit-variance normal on [-5, 5] with 20 bins, refined dyadically."""
    SUBCOMMAND = "discretize"
    FAMILY = "truncated_normal"
    FAMILY_PARAMS = dict(lower=-5.0, upper=5.0)
    N_BINS = 20
    THETA = 0.5
    THETA0 = 0.0
    LEVELS = 4
    N_OBS = 50
    SEED = 7


CONFIG_MODULE = TruncatedNormalConfigModule
