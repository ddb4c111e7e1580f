from __future__ import division
from __future__ import print_function
from __future__ import absolute_import


class TwoPointMixtureConfigModule:
    """Simulated Bin(8, p) counts with p drawn from {0.2, 0.7}."""
    SUBCOMMAND = "fit-mixture"
    N_TRIALS = 8
    SEED = 20240601
    SIMULATION = dict(support=[0.2, 0.7], weights=[0.4, 0.6], n_obs=5000)


CONFIG_MODULE = TwoPointMixtureConfigModule
