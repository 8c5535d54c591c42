"""Exception hierarchy shared by the model, evaluator, parser and checker."""

from __future__ import annotations


class GdcheckError(Exception):
    """Base class for every error raised by this package."""


class UnknownNameError(GdcheckError, KeyError):
    """A category, relation, entity, time point or defined class did not resolve."""

    def __init__(self, kind: str, name: str) -> None:
        self.kind = kind
        self.name = name
        super().__init__(f"unknown {kind}: {name!r}")

    def __str__(self) -> str:
        return self.args[0]


class KnowledgeBaseError(GdcheckError, ValueError):
    """A knowledge base violates one of its structural invariants."""


class EvaluationError(GdcheckError):
    """A formula could not be evaluated (e.g. an unbound variable)."""


class CategoryError(GdcheckError, ValueError):
    """A category was used where its kind is not licensed."""


class CycleError(GdcheckError):
    """Defined classes refer to each other recursively."""


class ScenarioError(GdcheckError, ValueError):
    """A before/after scenario does not satisfy its preconditions."""


class NotApplicableError(GdcheckError, ValueError):
    """A constraint was asked about an entity it does not govern."""


class ParseError(GdcheckError, ValueError):
    """Syntax or resolution failure with a 1-based source position."""

    def __init__(self, line: int, column: int, expected: str, found: str) -> None:
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        super().__init__(f"{line}:{column}: expected {expected}, found {found}")
