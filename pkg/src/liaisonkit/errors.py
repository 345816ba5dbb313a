"""Shared exception hierarchy.

Every error that can cross the HTTP boundary carries a stable machine-readable
``code`` so the service layer can map it without string matching.
"""


class LiaisonKitError(Exception):
    """Base class for all package errors."""

    code = "internal_error"


class ValidationError(LiaisonKitError):
    code = "validation_error"


class ParseError(LiaisonKitError):
    """Malformed raw document markup."""

    code = "parse_error"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FilterExpressionError(LiaisonKitError):
    code = "bad_filter_expression"


class IntegrityError(LiaisonKitError):
    code = "integrity_error"


class MissingScoreError(LiaisonKitError):
    code = "missing_score"


class UnknownTopicError(LiaisonKitError):
    code = "unknown_topic"


class UndefinedToneError(LiaisonKitError):
    code = "undefined_tone"


class EmptySeriesError(LiaisonKitError):
    code = "empty_series"


class UnsignedSpanError(LiaisonKitError):
    """No usable direction cue for a parsed rate span."""

    code = "unsigned_span"


class VocabularyError(LiaisonKitError):
    code = "vocabulary_error"


class SamplingError(LiaisonKitError):
    code = "sampling_error"


class MetricError(LiaisonKitError):
    code = "metric_error"


class MissingDataError(LiaisonKitError):
    code = "missing_data"

    def __init__(self, message: str, columns: list[str] | None = None):
        self.columns = columns or []
        super().__init__(message)


class RankDeficientError(LiaisonKitError):
    code = "rank_deficient"


class ConvergenceError(LiaisonKitError):
    code = "no_convergence"

    def __init__(self, message: str, sweeps: int = 0, max_delta: float = float("nan")):
        self.sweeps = sweeps
        self.max_delta = max_delta
        super().__init__(f"{message} (sweeps={sweeps}, max_delta={max_delta:g})")


class ProtocolError(LiaisonKitError):
    code = "protocol_error"


class StoreError(LiaisonKitError):
    code = "store_error"


class AuthError(LiaisonKitError):
    code = "unauthorized"
