"""Exception hierarchy.

Validation problems (bad input) derive from :class:`ValidationError`, numerical
failures (singular matrices, ambiguous classification, stalled optimizers)
derive from :class:`NumericalError`.  The command line maps the first family to
exit status 2 and the second to exit status 3.
"""


class ExotelaError(Exception):
    """Base class of every error raised by the package."""


class ValidationError(ExotelaError, ValueError):
    """Input does not satisfy a documented precondition."""


class NumericalError(ExotelaError, ArithmeticError):
    """A computation could not be carried out reliably."""


class SingularTensorError(NumericalError):
    """Inversion of a (near) singular tensor.

    Attributes
    ----------
    smallest_singular_value : float
        Smallest singular value of the Kelvin matrix.
    """

    def __init__(self, message, smallest_singular_value):
        super().__init__(message)
        self.smallest_singular_value = float(smallest_singular_value)


class AmbiguousClassError(NumericalError):
    """Two symmetry classes are both compatible with the data at tolerance.

    Attributes
    ----------
    candidates : tuple of str
        The competing class labels.
    """

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(str(c) for c in candidates)


class ConvergenceError(NumericalError):
    """An iterative method stopped without meeting its convergence test.

    Attributes
    ----------
    best : object
        Best result found before giving up.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
