"""Exceptions shared across the engine."""

from __future__ import annotations


class FormatError(ValueError):
    """Malformed input file.

    Carries enough context (path, line number, record ordinal) to point a
    user at the offending record.
    """

    def __init__(self, message: str, *, path: str | None = None,
                 line: int | None = None, ordinal: int | None = None):
        self.path = path
        self.line = line
        self.ordinal = ordinal
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if ordinal is not None:
            where.append(f"record {ordinal}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class DuplicateIdError(FormatError):
    """The same id appeared twice where ids must be unique."""


class EmptyCorpusError(ValueError):
    """An index build received no documents."""


class SnapshotError(ValueError):
    """Index snapshot file is unreadable or has the wrong magic/version."""
