"""Exception types shared across the package."""


class ArenaError(Exception):
    """Base class for all errors raised by routing_arena."""


class ValidationError(ArenaError, ValueError):
    """Malformed graph, path, player, or instance file.

    ``line`` is set when the error can be anchored to a line of an input file.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidRoutingError(ArenaError, ValueError):
    pass


class InvalidPlayerError(ArenaError, IndexError):
    pass


class InstanceTooLargeError(ArenaError):
    pass


class NonConvergenceError(ArenaError):
    """Best-response dynamics hit ``max_steps`` under a model with no potential."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class NoEquilibriumError(ArenaError):
    pass


class MalformedPairError(ArenaError, ValueError):
    pass


class GenerationError(ArenaError):
    pass
