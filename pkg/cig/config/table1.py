from __future__ import division
from __future__ import print_function
from __future__ import absolute_import


class Table1ConfigModule:
    """Counts of 0..7 successes out of seven trials, fitted by binomial mixtures."""
    SUBCOMMAND = "fit-mixture"
    COUNTS = [214, 154, 83, 34, 25, 9, 5, 0]
    N_TRIALS = 7


CONFIG_MODULE = Table1ConfigModule
