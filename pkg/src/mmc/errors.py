"""Exception hierarchy shared by the package."""


class MMCError(Exception):
    """Base class for all errors raised by :mod:`mmc`."""


class BoundsError(MMCError, IndexError):
    """A line/column index or coordinate lies outside the matrix."""


class DomainError(MMCError, ValueError):
    """An argument is outside the domain of the operation (e.g. invalid contraction)."""


class GuardError(MMCError):
    """An exhaustive routine refused to run because the instance is too large."""


class ParseError(MMCError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
