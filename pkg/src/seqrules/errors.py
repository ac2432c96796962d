"""Exception hierarchy shared across the package."""


class SeqRulesError(Exception):
    """Base class for all package errors."""


class ParseError(SeqRulesError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class RoleError(SeqRulesError):
    """Invalid attribute role assignment."""


class SchemaError(SeqRulesError):
    """Rule or example does not match the dataset schema."""


class UndefinedCoverageError(SeqRulesError):
    """Quality measure evaluated on a rule that covers nothing."""


class UnsupportedMeasureError(SeqRulesError):
    """Measure not applicable to the given task (survival coverings)."""


class UndefinedMetricError(SeqRulesError):
    """Metric has no defined value on this test set (e.g. constant labels)."""


class GrowthFailure(SeqRulesError):
    """No rule satisfying the minimum-support constraint exists."""
