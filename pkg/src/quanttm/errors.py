"""Typed error hierarchy shared by every layer of the package.

Every error carries an optional ``path`` naming the offending entity
(dotted, with list indices), so the CLI and the HTTP service can point
users at the exact field that failed.
"""

from __future__ import annotations


class QuantTmError(Exception):
    """Base class for all domain errors."""

    code = "error"

    def __init__(self, message: str, path: str | None = None):
        self.message = message
        self.path = path
        super().__init__(message if path is None else f"{path}: {message}")


class DuplicateId(QuantTmError):
    code = "duplicate_id"


class DanglingReference(QuantTmError):
    code = "dangling_reference"


class ProbabilityOutOfRange(QuantTmError):
    code = "probability_out_of_range"


class InvalidValue(QuantTmError):
    """Catch-all for field-level invariant violations (empty name, bad degree, ...)."""

    code = "invalid_value"


class InvalidCurrency(QuantTmError):
    code = "invalid_currency"


class NonPositiveRate(QuantTmError):
    code = "non_positive_rate"


class UnknownFactor(QuantTmError):
    code = "unknown_factor"


class MissingEstimate(QuantTmError):
    code = "missing_estimate"


class MixedCurrency(QuantTmError):
    code = "mixed_currency"


class RangeOutOfBounds(QuantTmError):
    code = "range_out_of_bounds"


class InvalidPolicy(QuantTmError):
    """A user-supplied risk-matrix policy or grade banding failed lint checks."""

    code = "invalid_policy"


class MalformedDocument(QuantTmError):
    code = "malformed_document"


class UnknownSchemaVersion(QuantTmError):
    code = "unknown_schema_version"


class ValidationFailure(QuantTmError):
    """A document parsed but violated domain invariants.

    ``violations`` holds one entry per broken rule; ``path`` points at the
    first of them.
    """

    code = "validation_failure"

    def __init__(self, message: str, path: str | None = None, violations: list | None = None):
        super().__init__(message, path)
        self.violations = violations or []


class IoFailure(QuantTmError):
    code = "io_failure"
