"""Exception hierarchy.

Input problems (bad files, malformed expressions, shape mismatches) derive
from :class:`InputError`; failures of the mathematics itself (a singular
pivot, a non-homogeneous scalar) derive from :class:`MathError`.  The CLI maps
the two families onto distinct exit codes.
"""


class GradedError(Exception):
    pass


class InputError(GradedError):
    pass


class MathError(GradedError):
    pass


class DimensionError(InputError):
    pass


class PresentationError(InputError):
    pass


class ParseError(InputError):
    pass


class DegreeViolation(MathError):
    def __init__(self, i, j, expected, found):
        self.i, self.j = i, j
        self.expected, self.found = expected, found
        super().__init__(
            f"entry ({i}, {j}) has degree {found}, block requires {expected}"
        )


class NonHomogeneous(MathError):
    pass


class UndefinedDegree(MathError):
    pass


class NotInvertible(MathError):
    pass


class DecompositionFailed(MathError):
    pass


class DifferentialNotInvariant(MathError):
    pass


class UnsupportedDegree(MathError):
    pass
