from __future__ import division
from __future__ import print_function
from __future__ import absolute_import


class CensoredExponentialConfigModule:
    """Leukaemia survival times in days, censored at 750, binned in 4-day bins."""
    SUBCOMMAND = "discretize"
    FAMILY = "censored_exponential"
    FAMILY_PARAMS = dict(censor_time=750.0)
    WIDTH = 4.0
    LEVELS = 4
    N_OBS = 43
    N_REP = 2000
    SEED = 43
    DATA = [7, 47, 58, 74, 177, 232, 273, 285, 317, 429, 440, 445, 455, 468, 495, 497, 532, 571,
            579, 581, 650, 702, 715, 779, 881, 900, 930, 968, 1077, 1109, 1314, 1334, 1367, 1534,
            1712, 1784, 1877, 1886, 2045, 2056, 2260, 2429, 2509]


CONFIG_MODULE = CensoredExponentialConfigModule
