from __future__ import division
from __future__ import print_function
from __future__ import absolute_import


class Example5ConfigModule:
    """Two-direction family on four bins: lines θ + 1, 2θ + 4, 3θ + 9 and 4θ - 1."""
    SUBCOMMAND = "limits"
    BASE_POINT = [0.25, 0.25, 0.25, 0.25]
    STATISTICS = [[1.0, 2.0, 3.0, 4.0],
                  [1.0, 4.0, 9.0, -1.0]]
    PENCIL = dict(slopes=[1.0, 2.0, 3.0, 4.0], intercepts=[1.0, 4.0, 9.0, -1.0])
    COUNTS = [3, 2, 4, 1]


CONFIG_MODULE = Example5ConfigModule
