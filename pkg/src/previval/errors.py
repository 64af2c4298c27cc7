"""Exception hierarchy shared by the library and the CLI."""
from __future__ import annotations


class PrevivalError(Exception):
    """Base class for all errors raised by :mod:`previval`."""


class InvalidStateError(PrevivalError, ValueError):
    """An input violates a state, operator or ensemble invariant."""


class NoPriorInformationError(InvalidStateError):
    """An a-priori operator was requested from an empty ensemble."""


class ZeroProbabilityError(PrevivalError):
    """Conditioning on a measurement outcome that has zero probability.

    This is the 0/0 case of Bayesian inversion. It is kept distinct from
    :class:`InvalidStateError` so callers can tell "impossible outcome" apart
    from "bad input".
    """

    def __init__(self, message: str, lambda_tau: float | None = None):
        super().__init__(message)
        self.lambda_tau = lambda_tau


class ConfigError(PrevivalError):
    """Malformed scenario configuration file."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
