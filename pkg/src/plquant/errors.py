"""Exception hierarchy.  Each error carries the pipeline stage that raised it."""


class PLQuantError(Exception):
    stage = "general"
    exit_code = 3


class InvalidInput(PLQuantError):
    stage = "input"
    exit_code = 2


class ParseError(InvalidInput):
    stage = "parse"


class NonLinearExponentSubstitution(PLQuantError):
    stage = "exprcore"


class PoleAtOrigin(PLQuantError):
    stage = "exprcore"


class NotSeriesExpandable(PLQuantError):
    stage = "exprcore"


class NonGroupLikeExponent(PLQuantError):
    stage = "coproduct"


class NonGroupLikeLog(PLQuantError):
    stage = "coproduct"


class NotFaithful(PLQuantError):
    stage = "grouprep"


class NonClosedFormSpectrum(PLQuantError):
    stage = "grouprep"


class RepresentationError(InvalidInput):
    stage = "grouprep"


class RecipeSearchFailed(PLQuantError):
    stage = "coproduct"


class DomainError(PLQuantError):
    stage = "coproduct"


class NonInvertibleElement(PLQuantError):
    stage = "coproduct"


class NoSolution(PLQuantError):
    stage = "plsolver"


class NonUniqueSolution(PLQuantError):
    stage = "plsolver"

    def __init__(self, message, residual=0):
        super().__init__(message)
        self.residual = residual


class AmbiguousOrdering(PLQuantError):
    stage = "ncquant"


class FuelExhausted(PLQuantError):
    stage = "ncquant"
