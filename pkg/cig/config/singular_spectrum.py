from __future__ import division
from __future__ import print_function
from __future__ import absolute_import


class SingularSpectrumConfigModule:
    """π₀ = 0 makes the Fisher information singular; bin 3 is empty as well."""
    SUBCOMMAND = "spectrum"
    PI = [0.0, 0.2, 0.3, 0.0, 0.5]


CONFIG_MODULE = SingularSpectrumConfigModule
