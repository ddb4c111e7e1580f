from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

from cig.modeling.discretizer import bin_probabilities, partition_for
from cig.modeling.families import make_continuous_family


class DiscretizedNormalConfigModule:
    """Standard normal on [-5, 5] cut into 81 equal bins."""
    SUBCOMMAND = "spectrum"
    N_BINS = 81
    NEAR_REPLICATE_TOL = 0.6

    def __init__(self):
        family = make_continuous_family("truncated_normal", lower=-5.0, upper=5.0)
        self.PI = bin_probabilities(family, partition_for(family, n_bins=self.N_BINS), 0.0).probs


CONFIG_MODULE = DiscretizedNormalConfigModule
