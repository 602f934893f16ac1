"""Exception types shared across the package."""


class PromiseLabError(Exception):
    """Base class for all errors raised by promiselab."""


class ParseError(PromiseLabError):
    """Malformed textual input. ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class WidthError(ParseError):
    """A variable reference exceeds its declared block width."""


class ShapeError(PromiseLabError):
    """Operands do not have the required block structure or sizes."""


class LevelMismatch(PromiseLabError):
    """A problem of level n was applied to a family with a different block count."""


class CapExceeded(PromiseLabError):
    """The requested enumeration exceeds the configured assignment cap."""


class PathCapExceeded(PromiseLabError):
    """Adversarial exploration produced more paths than allowed."""


class UnknownRule(PromiseLabError):
    """No reduction rule registered under the requested name."""


class TypeMismatch(PromiseLabError):
    """Rule composition endpoints do not line up."""


class IncompleteRegistry(PromiseLabError):
    """A hierarchy edge lacks a witness tag."""
