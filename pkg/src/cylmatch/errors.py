"""Exception types shared across the package."""

from __future__ import annotations


class CylmatchError(Exception):
    """Base class for all package-specific errors."""


class DegenerateError(CylmatchError):
    """A geometric predicate hit a degenerate configuration (touching,
    collinear overlap, point exactly on a curve)."""


class NotCircularError(CylmatchError):
    """Operation requires a wrapping edge but got a direct one."""


class EventAtCutError(CylmatchError):
    """A vertex, polyline breakpoint, or crossing lies exactly on the
    requested cut line."""

    def __init__(self, msg: str, x=None):
        super().__init__(msg)
        self.x = x


class InvalidDrawingError(CylmatchError):
    """The drawing violates an invariant a caller relied on."""


class NotAFlagError(InvalidDrawingError):
    """Operation requires every edge to wrap."""


class GenerationFailedError(CylmatchError):
    """Rejection sampling exhausted its attempt budget."""


class TooLargeError(CylmatchError):
    """Instance exceeds a hard size cap (oracle guard)."""


class ParseError(CylmatchError):
    """Malformed input file; carries line and column."""

    def __init__(self, msg: str, line: int, col: int = 0):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col


class InvariantError(CylmatchError):
    """Structurally well-formed input that violates a cheap representation
    invariant; deeper geometric checks are validate()'s job."""


class WrappingPairError(CylmatchError):
    """Greedy pairing hit a wrapping edge."""


class NoValidCutError(CylmatchError):
    """No event-free cut position could be found."""


class ParamsRequiredError(CylmatchError):
    """Paper mode requires explicit parameters."""


class NoSplitError(CylmatchError):
    """No admissible split index exists (alpha < 2)."""


class UnrelatedVertexError(InvalidDrawingError):
    """A vertex that must be comparable to a matching edge is not."""
