from __future__ import absolute_import
from __future__ import print_function
from __future__ import division


class Optimizer:
    """Common surface of the numerical solvers: configure with `setup`, solve with
    `obtain_solution`, and clear any warm-start state with `reset`."""

    def __init__(self, *args, **kwargs):
        self.diagnostics = []

    def setup(self, *args, **kwargs):
        raise NotImplementedError("Must be implemented in subclass.")

    def reset(self):
        self.diagnostics = []

    def obtain_solution(self, *args, **kwargs):
        raise NotImplementedError("Must be implemented in subclass.")
