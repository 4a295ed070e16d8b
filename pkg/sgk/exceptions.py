#! /usr/bin/env python3

from __future__ import annotations

from typing import Any, Optional


class SgkError(Exception):
    """Base class for every error raised by sgk"""


class DegenerateInputError(SgkError, ZeroDivisionError):
    """A zero divisor or a singular matrix was supplied"""


class SingularEvaluationError(SgkError, ZeroDivisionError):
    """An expression was evaluated where one of its denominators vanishes"""


class InvalidInputError(SgkError, ValueError):
    """An argument violates the precondition of an operation"""


class DimensionMismatchError(InvalidInputError):
    pass


class ParentMismatchError(InvalidInputError):
    pass


class SpanError(InvalidInputError):
    """A vector or matrix does not lie in the expected span"""


class PatternViolationError(InvalidInputError):
    """A matrix does not satisfy the membership pattern of a group model"""


class ClosureError(InvalidInputError):
    """A span is not closed under the bracket"""

    def __init__(self, message: str, pair: tuple[Any, Any]):
        super().__init__(message)
        self.pair = pair


class ConventionError(SgkError):
    """Two independent routes to the same quantity disagree"""


class InvalidMorphismError(SgkError):
    """A Harish-Chandra morphism failed its validation checks"""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class InputFileError(SgkError):
    """An input file could not be parsed or failed validation"""

    def __init__(
        self, path: str, message: str, line: Optional[int] = None, column: Optional[int] = None
    ):
        location = path if line is None else f"{path}:{line}:{column}"
        super().__init__(f"{location}: {message}")
        self.path = path
        self.line = line
        self.column = column
