from __future__ import division
from __future__ import print_function
from __future__ import absolute_import


class Logistic7ConfigModule:
    """Seven binary responses with intercept and linear trend in the covariate 1..7."""
    SUBCOMMAND = "limits"
    COVARIATES = [[1.0, float(i)] for i in range(1, 8)]
    RESPONSES = [[0, 1, 0, 1, 0, 1, 1],
                 [1, 1, 0, 0, 0, 0, 0]]


CONFIG_MODULE = Logistic7ConfigModule
