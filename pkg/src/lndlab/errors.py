"""Exception hierarchy.  Every input error the CLI maps to exit code 2 derives
from :class:`LndlabError`."""


class LndlabError(ValueError):
    pass


class ExpressionError(LndlabError):
    """Malformed expression or unsupported syntax."""


class InvertibilityError(LndlabError):
    """A negative power of something that is not a unit of the ring."""


class WeightError(LndlabError):
    pass


class ConeError(LndlabError):
    """The generators do not span a strictly convex two-dimensional cone."""


class DerivationError(LndlabError):
    pass


class GraphError(LndlabError):
    pass


class PreconditionError(LndlabError):
    pass


class FixtureError(LndlabError):
    pass
