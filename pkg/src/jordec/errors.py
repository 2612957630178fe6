"""Exception types shared across the package."""

from __future__ import annotations


class JordecError(Exception):
    """Base class for all errors raised by jordec."""


class InputError(JordecError, ValueError):
    """Malformed or mismatched input (shapes, partitions, file contents)."""


class NotSplittable(JordecError):
    """An operation needing at least two diagonal blocks got a single block."""


class AxiomViolation(JordecError):
    """A bimodule failed one of its axioms; carries the failing report."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NotJordan(JordecError):
    """The input map is not a Jordan derivation."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class TheoremViolation(JordecError):
    """An identity guaranteed by the decomposition theorem failed.

    This should never be raised; if it is, either the code has a bug or the
    input falsifies a hypothesis of the theorem.
    """

    def __init__(self, step: str, message: str, witness=None):
        super().__init__(f"[{step}] {message}")
        self.step = step
        self.witness = witness
