"""Exception hierarchy for renyisc.

Every class carries the CLI exit code it maps to, so ``cli.main`` can turn any
library failure into the documented exit-code contract without a lookup table.
"""

from __future__ import annotations

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFINITE = 2
EXIT_BUDGET = 3
EXIT_PROPERTY = 4


class RenyiError(Exception):
    """Base class for all errors raised deliberately by renyisc."""

    exit_code = EXIT_INPUT


class InputError(RenyiError, ValueError):
    """Malformed input: unreadable file, wrong shape, non-PSD state."""


class DimensionError(InputError):
    """Operator dimensions do not fit together."""


class DomainError(InputError):
    """A mathematical precondition does not hold (α range, singular test, ...)."""


class SupportError(DomainError):
    """A support inclusion needed for a finite answer is violated."""


class BudgetError(RenyiError):
    """The requested computation exceeds the dense-matrix dimension budget."""

    exit_code = EXIT_BUDGET


class PropertyViolation(RenyiError):
    """A verification suite found a counterexample."""

    exit_code = EXIT_PROPERTY

    def __init__(self, message: str, report: dict | None = None) -> None:
        super().__init__(message)
        self.report = report or {}
