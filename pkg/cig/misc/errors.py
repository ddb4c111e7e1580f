from __future__ import division
from __future__ import print_function
from __future__ import absolute_import


class InvalidInputError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


class OutOfSimplexError(ValueError):
    """Raised by mixture geodesics that leave the simplex.

    `max_step` is the largest step (same sign as the requested one) that stays inside.
    """

    def __init__(self, message, max_step):
        super(OutOfSimplexError, self).__init__(message)
        self.max_step = max_step


class InvalidBasePointError(ValueError):
    pass


class UndefinedNormError(ValueError):

    def __init__(self, message, bin_index):
        super(UndefinedNormError, self).__init__(message)
        self.bin_index = bin_index


class EmptySpectrumError(ValueError):
    pass


class RankError(ValueError):
    pass


class OrthogonalityError(ValueError):
    pass


class OutsidePolytopeError(ValueError):

    def __init__(self, message, index):
        super(OutsidePolytopeError, self).__init__(message)
        self.index = index


class NoInteriorSolutionError(ValueError):
    """The target mean sits on the boundary of (or outside) the mean polytope.

    `face` holds the bins of the smallest face containing the target, empty when the
    target lies outside the polytope altogether.
    """

    def __init__(self, message, face=()):
        super(NoInteriorSolutionError, self).__init__(message)
        self.face = tuple(face)


class NotInFamilyError(ValueError):
    pass


class UnknownFamilyError(ValueError):
    pass


class QuadratureError(RuntimeError):
    pass


class InfeasibleMixtureError(RuntimeError):
    pass
