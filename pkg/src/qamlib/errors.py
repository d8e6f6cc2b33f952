"""Exception types shared across the library."""


class QamError(Exception):
    """Base class for all library errors."""


class ValidationError(QamError):
    """Malformed input: bad shapes, bad spec parameters, unparseable data.

    ``field`` names the offending argument or spec field when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class DomainError(QamError):
    """A point lies outside the primal domain of a generator (or an
    operation's declared interval)."""


class DualDomainError(DomainError):
    """A point lies outside the dual domain (the image of the gradient map)."""


class InfiniteDivergenceError(QamError):
    """A log-based divergence is infinite: the first argument puts mass
    where the second has none."""


class ConvergenceError(QamError):
    """An iterative solver failed to reach its tolerance.

    ``trace`` carries whatever diagnostic object the solver produced.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class DomainEscapeError(ConvergenceError):
    """An iterate left the domain mid-run (numerical failure, not bad input)."""
