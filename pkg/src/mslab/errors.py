"""Exception hierarchy. Every error raised deliberately by mslab derives from MslabError."""


class MslabError(Exception):
    pass


class DomainError(MslabError, ValueError):
    """A point lies outside the region an operation is defined on."""


class SingularityError(MslabError, ZeroDivisionError):
    """Evaluation at a singular point, e.g. the location of a singular atom."""


class GridMismatchError(MslabError, ValueError):
    pass


class ResolutionError(MslabError):
    """The grid-resolution policy cannot be met (the "resolution exceeded" case)."""


class DegenerateModulusError(MslabError, ValueError):
    pass


class NonAnalyticError(MslabError, ValueError):
    """Negative-frequency content too large for an H^2 function."""


class RankViolationError(MslabError, ArithmeticError):
    pass


class InvalidPairError(MslabError, ValueError):
    """(a, b) fails the Sarason pair conditions on the grid."""


class DegenerateDenominatorError(MslabError, ArithmeticError):
    pass


class NonExtremalError(MslabError, ValueError):
    pass


class SubsetViolationError(MslabError, ValueError):
    pass


class ConfigError(MslabError, ValueError):
    pass
