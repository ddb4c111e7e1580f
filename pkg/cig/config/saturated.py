from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np


class SaturatedConfigModule:
    """The full simplex on five bins written as an exponential family."""
    SUBCOMMAND = "limits"
    BASE_POINT = np.full(5, 0.2)
    STATISTICS = np.eye(5)[1:]
    COUNTS = [4, 0, 3, 2, 1]


CONFIG_MODULE = SaturatedConfigModule
