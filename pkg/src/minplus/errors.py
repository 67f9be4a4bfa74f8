"""Exception hierarchy shared across the workbench."""


class MinplusError(Exception):
    """Base class for all workbench errors."""


class InputError(MinplusError):
    """Malformed or inconsistent input: bad identifiers, violated preconditions."""


class WeightOverflowError(MinplusError):
    """A finite weight operation left the 64-bit signed range."""


class FormatError(InputError):
    """Text-format parse error, carries a 1-based line number."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class GapBoundError(MinplusError):
    """Lifting the canonical run failed: counterexample to the bounded-gap
    assumption of the window construction. `position` is the 0-based step at
    which the lifted transition was rejected (len(word) means the final state
    was not accepting)."""

    def __init__(self, position, message):
        super().__init__(message)
        self.position = position


class InternalInvariantError(MinplusError):
    """A consequence guaranteed by the theory failed to materialise; indicates
    a bug or a violated unchecked precondition, never a user error."""
