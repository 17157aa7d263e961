"""Exception types raised across the package."""

from __future__ import annotations

import numpy as np


class CountfoldError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CountfoldError, ValueError):
    """Input data violates a documented precondition."""


class ConvergenceError(CountfoldError, RuntimeError):
    """An iterative solver hit its iteration cap before converging.

    Attributes
    ----------
    last_iterate
        The final iterate reached before giving up.
    history
        Optional per-iteration diagnostic trace (e.g. constraint residuals).
    """

    def __init__(self, message, last_iterate=None, history=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.history = history


class NumericOverflowError(CountfoldError, FloatingPointError):
    """A likelihood or weight evaluation produced a non-finite value.

    Carries the (row, column) position of the first offending cell when known.
    """

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class IllConditionedUpdateError(CountfoldError, np.linalg.LinAlgError):
    """A rank-one inverse update has a vanishing denominator."""


class DegenerateTestError(CountfoldError, RuntimeError):
    """A test statistic's variance factor is non-positive."""


class TableFormatError(CountfoldError, ValueError):
    """A delimited input table could not be parsed.

    Attributes
    ----------
    details
        Structured description of offending rows/columns/ids, suitable for
        machine-readable error reports.
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}
