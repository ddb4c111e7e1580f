from __future__ import division
from __future__ import print_function
from __future__ import absolute_import


class BernoulliConfigModule:
    """A fair coin tossed ten times."""
    SUBCOMMAND = "saddlepoint"
    BASE_POINT = [0.5, 0.5]
    STATISTICS = [[0.0, 1.0]]
    LAM_TRUE = [0.0]
    N_OBS = 10


CONFIG_MODULE = BernoulliConfigModule
