"""Exception types shared across the engine.

Everything raised on purpose derives from EngineError so callers (notably the
CLI) can map failures to exit codes without enumerating modules.
"""


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class OutOfRange(EngineError, ValueError):
    """A parameter or state field violates its documented bound."""

    def __init__(self, field: str, value, bound: str):
        self.field = field
        self.value = value
        self.bound = bound
        super().__init__(f"{field}={value!r} violates bound: {bound}")


class StepCountTooSmall(EngineError, ValueError):
    """Time step too coarse for the requested rates."""


class DegenerateStart(EngineError, ValueError):
    """x0 or y0 is zero; the log-transformed schemes need a positive start."""


class GridTooCoarse(EngineError, ValueError):
    """Fewer than 3 spatial nodes per axis (or no time steps)."""


class UnstableConfiguration(EngineError, ValueError):
    """The explicit mixed-derivative term violates its stability bound."""


class OutOfDomain(EngineError, ValueError):
    """Query point outside the unit square."""


class EmptySample(EngineError, ValueError):
    """A price was requested from a sample with no paths."""


class ParseError(EngineError, ValueError):
    """Scenario text is not well-formed."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)


class ValidationError(EngineError, ValueError):
    """Scenario parsed but its values fail validation."""
