"""Error hierarchy shared across the package.

Every error that can cross the service API derives from :class:`RuralCareError`;
the class name doubles as the machine-readable error code on the wire.
"""


class RuralCareError(Exception):
    """Base class for all domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- instruments ---

class ParseError(RuralCareError):
    """Definition document is not well-formed."""


class SchemaError(RuralCareError):
    """Definition document violates an instrument invariant."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class VersionMismatch(RuralCareError):
    """Response pins a different instrument version than the one supplied."""


class NotScorable(RuralCareError):
    """Response cannot be scored (e.g. image-only paper submission)."""


class InvalidLength(RuralCareError):
    """Questionnaire has the wrong number of items."""


class OutOfRange(RuralCareError):
    """Answer value falls outside the item's allowed range."""


# --- scheduling ---

class InvalidTimeline(RuralCareError):
    """Timestamps are mutually inconsistent (e.g. completion before enrollment)."""


# --- sync ---

class PayloadTooLarge(RuralCareError):
    """Bundle payload exceeds the configured cap."""


class MalformedBundle(RuralCareError):
    """Bundle bytes do not decode under the wire format."""


class Expired(RuralCareError):
    """Bundle TTL elapsed before it could be applied."""


# --- simulator ---

class MalformedTrace(RuralCareError):
    """Contact trace is unsorted or contains invalid rows."""


class MalformedWorkload(RuralCareError):
    """Workload references invalid nodes or times."""


# --- ingest ---

class ConsentDenied(RuralCareError):
    """Subject has not granted collection for this data type."""


class ClockSkew(RuralCareError):
    """Observation timestamp is too far in the future."""


class UnknownSubject(RuralCareError):
    """No such subject is registered."""


# --- service ---

class AuthFailure(RuralCareError):
    """Token invalid, or actor not authorized for the target subject."""


class ValidationFailure(RuralCareError):
    """Submitted record failed validation."""

    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class DuplicateSubmission(RuralCareError):
    """A record with this id was already accepted."""
