"""Exception hierarchy shared by all shadowlab modules."""


class ShadowlabError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(ShadowlabError):
    pass


class ZeroDirection(ShadowlabError):
    pass


class SingularMatrix(ShadowlabError):
    pass


class NotContractive(ShadowlabError):
    def __init__(self, message, norm=None):
        super().__init__(message)
        self.norm = norm


class BudgetExceeded(ShadowlabError):
    pass


class TooManyComponents(ShadowlabError):
    pass


class ParamOutOfRange(ShadowlabError):
    pass


class NoValidCornerCount(ShadowlabError):
    pass


class DegenerateSimplex(ShadowlabError):
    pass


class ImagesOverlap(ShadowlabError):
    pass


class NonSummableEpsilons(ShadowlabError):
    pass


class NotConvex(ShadowlabError):
    pass


class DegenerateInput(ShadowlabError):
    pass


class TooFewScales(ShadowlabError):
    pass


class InvalidWitness(ShadowlabError):
    pass


class SpecFormatError(ShadowlabError):
    """Raised when an interchange file cannot be parsed or has the wrong type."""
