"""Exception hierarchy.

Every domain error derives from :class:`PredictiveError`, which is itself a
``ValueError`` so callers that only care about bad input can catch that.
"""


class PredictiveError(ValueError):
    pass


class DegeneratePosterior(PredictiveError):
    """All discrete atoms received zero likelihood."""


class InvalidBracket(PredictiveError):
    """A two-point construction needs ``a < m < b`` inside [0, 1]."""


class InvalidCounts(PredictiveError):
    """Success count outside ``0 <= s <= n``."""


class DomainError(PredictiveError):
    """Argument outside the domain of a divergence or information function."""


class NoWitness(PredictiveError):
    """No separating threshold exists (degenerate posterior)."""


class UnknownFigure(PredictiveError):
    pass
