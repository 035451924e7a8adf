"""Exception types shared across the toolkit."""
from __future__ import annotations


class EntitySwitchError(Exception):
    """Base class for all input/validation errors raised by this package."""


class ParseError(EntitySwitchError):
    """Malformed column-format input."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class InventoryError(EntitySwitchError):
    """Invalid inventory file or an inventory unfit for the requested use."""


class AnnotationError(EntitySwitchError):
    """Malformed LOC/ORG annotation file."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class SamplingError(EntitySwitchError):
    """No inventory entry satisfies a requested (type, constraint)."""


class AlignmentError(EntitySwitchError):
    """Gold and prediction corpora do not share the same token sequence."""


class AuditError(EntitySwitchError):
    """Invalid manifest or audit configuration."""
