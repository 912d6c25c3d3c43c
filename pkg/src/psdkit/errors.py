"""Exception taxonomy shared across the toolkit.

Validation problems that are *data* (lists of rule violations) are returned
as values, not raised; the exceptions here mark conditions where an operation
cannot produce a result at all.
"""

from __future__ import annotations


class PsdKitError(Exception):
    """Base class for every error raised by this package."""


# --- document model ---------------------------------------------------------

class PathOutOfBounds(PsdKitError):
    pass


class NotAGroup(PsdKitError):
    pass


class PathNotALeaf(PsdKitError):
    pass


class CannotRemoveRoot(PsdKitError):
    pass


class InvariantViolation(PsdKitError):
    """A mutation would leave the document violating a model invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invariant violation")


class InvalidDocument(PsdKitError):
    """An operation that requires a valid document was given a broken one."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid document")


class StepOutOfRange(PsdKitError):
    pass


# --- binary / file formats --------------------------------------------------

class BadSignature(PsdKitError):
    pass


class UnsupportedVersion(PsdKitError):
    pass


class UnsupportedDepth(PsdKitError):
    pass


class UnsupportedColorMode(PsdKitError):
    pass


class Truncated(PsdKitError):
    pass


class MalformedSectionNesting(PsdKitError):
    pass


class LengthMismatch(PsdKitError):
    pass


class SchemaViolation(PsdKitError):
    """Canonical-format document rejected; ``path`` points at the bad field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


# --- tool execution ---------------------------------------------------------

class UnknownTool(PsdKitError):
    pass


class ValidationFailed(PsdKitError):
    """A tool call failed validation; carries the violations and, for
    sequences, the index of the offending call."""

    def __init__(self, violations, index: int | None = None):
        self.violations = list(violations)
        self.index = index
        at = f" at call {index}" if index is not None else ""
        super().__init__("invalid tool call%s: %s" % (at, "; ".join(str(v) for v in self.violations)))


# --- dataset construction ---------------------------------------------------

class NothingToDistort(PsdKitError):
    pass


class UnrecoverableAttribute(PsdKitError):
    pass


# --- reward / advantage math -------------------------------------------------

class GroupTooSmall(PsdKitError):
    pass


# --- planners ----------------------------------------------------------------

class PlannerError(PsdKitError):
    pass


class Timeout(PlannerError):
    pass


class BadResponse(PlannerError):
    pass
