from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import numpy as np


class UniformConfigModule:
    SUBCOMMAND = "spectrum"
    PI = np.full(6, 1.0 / 6)


CONFIG_MODULE = UniformConfigModule
