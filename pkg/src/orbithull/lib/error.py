"""
Exception hierarchy shared by every tool, plus the ``fallible`` decorator.

Tools raise the narrow types below; ``fallible`` turns any of them into an
``ExecuteError`` carrying the exit code the command line should use.

Usage:
    .. code-block:: python

        @fallible
        def analyze(vector: np.ndarray) -> Verdict:
            if not vector.any():
                raise DomainError("empty orbit spectrum")    # exit code 2
            if too_many_monomials:
                raise ResourceLimitError("monomial cap hit") # exit code 1
            return solve(vector)
"""

import logging
from functools import wraps
from typing import Any, Callable, NoReturn, Optional, TypeVar, Union

logger = logging.getLogger(__name__)

_HINTS = """Common causes:
  ValidationError '<file>:<line>: ...'
      a value in the configuration file is malformed or out of range on that line
  DomainError 'empty orbit spectrum'
      the base vector is zero, choose a nonzero [vector]
  DomainError '... does not match representation dimension ...'
      [vector] must have n entries for the defining action, n*n for the adjoint one
  ResourceLimitError
      lower degree_bound or the enumeration bound, or raise the cap
Anything else is a bug; please report it with the configuration that triggered it.
"""


class OrbitHullError(Exception):
    """
    Base class of every error raised on purpose by orbithull.
    """


class ValidationError(OrbitHullError, ValueError):
    """
    Malformed input or configuration.

    Arguments:
        message (str): What is wrong.
        line (Optional[int]): The 1-based line of the offending configuration key, if known.
        source (Optional[str]): The configuration file name, if known.
    """

    def __init__(
        self, message: str, line: Optional[int] = None, source: Optional[str] = None
    ) -> None:
        self.line = line
        self.source = source
        if line is not None:
            message = f"{source or '<config>'}:{line}: {message}"
        super().__init__(message)


class DomainError(ValidationError):
    """
    An operation was called outside of its precondition.
    """


class ResourceLimitError(OrbitHullError):
    """
    A configured cardinality or size cap was exceeded.
    """


class ExecuteError(OrbitHullError):
    """
    Raised by :func:`fallible` in place of the original exception.

    Arguments:
        exit_code (int): The process exit code the command line front end should use.
    """

    def __init__(self, message: str, exit_code: int = 1) -> None:
        self.exit_code = exit_code
        super().__init__(message)


_R = TypeVar("_R")


def fallible(func: Callable[..., _R]) -> Callable[..., Union[_R, NoReturn]]:
    """
    Log and convert any ``Exception`` escaping ``func`` into an ``ExecuteError``.

    ``ValidationError`` (and so ``DomainError``) maps to exit code 2, everything
    else to 1. An ``ExecuteError`` from a nested call passes through untouched.
    """

    @wraps(func)
    def guarded(*args: Any, **kwargs: Any) -> Union[_R, NoReturn]:
        try:
            return func(*args, **kwargs)
        except ExecuteError:
            raise
        except Exception as exc:
            code = 2 if isinstance(exc, ValidationError) else 1
            logger.error("%s: %s\n%s", type(exc).__name__, exc, _HINTS)
            raise ExecuteError(str(exc), code) from exc

    return guarded
