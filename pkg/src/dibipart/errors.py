"""Exception hierarchy shared across the package."""


class DibipartError(Exception):
    pass


class ParseError(DibipartError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class HypothesisUnmet(DibipartError):
    """A precondition of a construction does not hold on the given input."""

    def __init__(self, message, claim=None, index=None):
        self.claim = claim
        self.index = index
        super().__init__(message)


class ConstructionStuck(DibipartError):
    """A greedy construction ran out of candidates; ``best`` holds partial output."""

    def __init__(self, message, best=None, claim=None, index=None):
        self.best = best
        self.claim = claim
        self.index = index
        super().__init__(message)


class NoSuchFan(DibipartError):
    def __init__(self, message, best=None):
        self.best = best
        super().__init__(message)


class SearchBudgetExceeded(DibipartError):
    def __init__(self, message, best=None):
        self.best = best
        super().__init__(message)


class NotATournament(DibipartError):
    pass


class NotStrong(DibipartError):
    pass


class InvalidPartition(DibipartError):
    pass


class PipelineFailure(DibipartError):
    """Structured abort of the partition pipeline.

    ``phase`` is the pipeline stage, ``claim`` a short identifier of the
    property that could not be established, ``summary`` a dict of partial
    state for diagnostics.
    """

    def __init__(self, phase, claim, message, summary=None, cause=None):
        self.phase = phase
        self.claim = claim
        self.message = message
        self.summary = summary or {}
        self.cause = cause
        super().__init__(f"[{phase}] {claim}: {message}")


class ClosureStuck(ConstructionStuck):
    """A greedy pool of the safety closure ran dry; ``pool`` names the set."""

    def __init__(self, pool, message, best=None):
        self.pool = pool
        super().__init__(f"{pool}: {message}", best=best)


class SurgeryStuck(DibipartError):
    pass


class MinimalityViolation(DibipartError):
    pass


class CaseExhausted(DibipartError):
    def __init__(self, message, vertex=None):
        self.vertex = vertex
        super().__init__(message)
