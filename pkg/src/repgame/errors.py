"""Exception types shared across the package."""


class RepgameError(Exception):
    """Base class for every error raised by this package."""


class DistributionNotNormalized(RepgameError):
    """A probability table does not sum to one or carries a bad weight."""


class ArityMismatch(RepgameError):
    """A tuple or table has the wrong number of components."""


class UnknownLabel(RepgameError):
    """An index points outside its alphabet or predicate list."""


class PlayerOutOfRange(RepgameError):
    """A player number is not in 1..k."""


class BudgetExceeded(RepgameError):
    """An enumeration would exceed the configured size ceiling."""


class PivotMismatch(RepgameError):
    """The two tuples of a link disagree on the pivot player's question."""


class MBlowup(RepgameError):
    """Uniformization would need more predicate slots than the cap allows."""


class NotUniformized(RepgameError):
    """The operation needs the explicit uniform predicate slot table."""


class NotLooselyConnected(RepgameError):
    """Saturation requires a loosely-connected input; decompose first."""


class MaxPassesExceeded(RepgameError):
    """Saturation did not reach a fixed point within the pass limit."""


class NotProjection(RepgameError):
    """The operation is only meaningful for projection games."""


class UncoveredVariable(RepgameError):
    """A clause list leaves some variable with no clause containing it."""


class ParseError(RepgameError):
    """A game file is malformed; the message names the offending field."""
