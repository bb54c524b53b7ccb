"""Error types shared across the frontends and the CLI."""

from __future__ import annotations


class SourceError(Exception):
    """Base for user-facing errors (syntax and typing)."""


class ParseError(SourceError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class InternalError(Exception):
    """An invariant of the toolkit itself was broken (never user error)."""
