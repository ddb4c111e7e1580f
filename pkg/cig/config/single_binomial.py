from __future__ import division
from __future__ import print_function
from __future__ import absolute_import


class SingleBinomialConfigModule:
    """Counts exactly proportional to Bin(2, 0.5)."""
    SUBCOMMAND = "fit-mixture"
    COUNTS = [25, 50, 25]
    N_TRIALS = 2


CONFIG_MODULE = SingleBinomialConfigModule
