"""Exception hierarchy shared by every module of the package."""


class ExactHomError(Exception):
    """Base class for all errors raised by exacthom."""


class ShapeError(ExactHomError, ValueError):
    pass


class CoefficientMismatch(ExactHomError, ValueError):
    pass


class MembershipError(ExactHomError, ValueError):
    """A relation vector does not lie in the span of the generators."""


class NotAComplex(ExactHomError, ValueError):
    """d_{n-1} d_n != 0; ``degree`` is the first offending n."""

    def __init__(self, degree, message=None):
        self.degree = degree
        super().__init__(message or f"d_{degree - 1} * d_{degree} != 0 at n={degree}")


class NotAChainMap(ExactHomError, ValueError):
    pass


class NotAHomotopy(ExactHomError, ValueError):
    pass


class CompositionMismatch(ExactHomError, ValueError):
    pass


class IndexOrder(ExactHomError, ValueError):
    pass


class InconsistentPage(ExactHomError, ValueError):
    pass


class NotFiltered(ExactHomError, ValueError):
    """A filtration step is not a subcomplex, or a gap is not concentrated."""


class SimplicialIdentityViolation(ExactHomError, ValueError):
    pass


class NegativeSupport(ExactHomError, ValueError):
    pass


class TooLarge(ExactHomError, ValueError):
    pass


class SchemaError(ExactHomError, ValueError):
    """Malformed input document; ``path`` is a JSON pointer to the problem."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
