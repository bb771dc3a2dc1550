"""Exception hierarchy.

Every error carries enough structure (offending pair, witness map, ...) for the
CLI to turn it into a machine-readable report.
"""


class LatticeLabError(Exception):
    """Base class for all library errors."""


class ValidationError(LatticeLabError):
    """Input failed a structural check (CLI exit code 1)."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class NotAPoset(ValidationError):
    pass


class NotALattice(ValidationError):
    pass


class NotBounded(ValidationError):
    pass


class NotDirected(ValidationError):
    pass


class NotSeparated(ValidationError):
    pass


class NotAnEmbedding(ValidationError):
    pass


class NotAnAntichain(ValidationError):
    pass


class NotMonotoneOnDomain(ValidationError):
    pass


class ArityMismatch(ValidationError):
    pass


class PerpUnavailable(ValidationError):
    pass


class SkeletonMismatch(ValidationError):
    pass


class FunctionsComparable(ValidationError):
    pass


class NotASublatticeCandidate(ValidationError):
    pass


class TrivialLattice(ValidationError):
    pass


class TooSmall(ValidationError):
    pass


class InvolutionFails(ValidationError):
    pass


class ComplementFails(ValidationError):
    pass


class NotAntitone(ValidationError):
    pass


class DegenerateSummand(ValidationError):
    pass


class BudgetExceeded(LatticeLabError):
    """A size budget would be exceeded (CLI exit code 2).

    ``partial`` records how far the computation got before giving up.
    """

    def __init__(self, message, limit=None, partial=None):
        super().__init__(message)
        self.limit = limit
        self.partial = partial
