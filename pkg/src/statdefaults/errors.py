"""Exception hierarchy shared across the package.

Everything user-facing derives from StatDefaultsError so the CLI can catch
one type and turn it into a nonzero exit with a readable message.
"""

from __future__ import annotations


class StatDefaultsError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(StatDefaultsError):
    """Malformed KB text. Carries 1-based line/column positions."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UndeclaredSymbolError(ParseError):
    """A formula or fact mentions a predicate/constant never declared."""


class InconsistentAxiomsError(StatDefaultsError):
    """The universal axioms admit no cell at all: the KB has no models."""


class EmptyConditionError(StatDefaultsError):
    """A proportion or entailment was requested against zero models."""


class CountBudgetError(StatDefaultsError):
    """The region-count-vector space exceeds the configured budget."""


class EnumerationCapError(StatDefaultsError):
    """The oracle's explicit model space exceeds its hard cap."""


class EvidenceBoundError(StatDefaultsError):
    """delta_valid_check would need to enumerate too many evidence sets."""


class NoStatsError(StatDefaultsError):
    """Rule generation was asked for a target no statistic talks about."""


class SchemaError(StatDefaultsError):
    """A KB does not have the mutually-exclusive exhaustive-partition shape."""
