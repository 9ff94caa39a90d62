"""Domain error hierarchy.

Every recoverable failure mode raised by this package carries a stable
``code`` string so that the CLI can map it to exit status 1 and the HTTP
service can map it to a structured error body without string-matching
messages.
"""

from __future__ import annotations


class LoopsiftError(Exception):
    """Base class for all domain errors."""

    code = "DOMAIN_ERROR"

    def __init__(self, message: str, **details: object):
        super().__init__(message)
        self.details = details


# --- corpus store -----------------------------------------------------------


class DuplicateIdError(LoopsiftError):
    """An example id is already present in the store."""

    code = "DUPLICATE_ID"


class EmptyTextError(LoopsiftError):
    """An example's text is empty or whitespace-only."""

    code = "EMPTY_TEXT"


class MalformedTimestampError(LoopsiftError):
    """A timestamp string is not valid ISO-8601 UTC."""

    code = "MALFORMED_TIMESTAMP"


class UnknownExampleError(LoopsiftError):
    """An operation referenced an example id that is not in the store."""

    code = "UNKNOWN_EXAMPLE"


class SchemeViolationError(LoopsiftError):
    """An annotation violates the labelling scheme invariants."""

    code = "SCHEME_VIOLATION"


class UnresolvedTieError(LoopsiftError):
    """Two annotators disagree and no tie-break annotation exists yet."""

    code = "UNRESOLVED_TIE"


class UnbalancedInputError(LoopsiftError):
    """A training snapshot was requested over a non-50-50 id set."""

    code = "UNBALANCED_INPUT"


class InvalidTimeRangeError(LoopsiftError):
    """A query time range has start > end."""

    code = "INVALID_TIME_RANGE"


# --- classifier -------------------------------------------------------------


class EmptyCorpusError(LoopsiftError):
    """Vocabulary fitting got no documents."""

    code = "EMPTY_CORPUS"


class SingleClassError(LoopsiftError):
    """Training or splitting requires both classes to be present."""

    code = "SINGLE_CLASS"


class TooFewPerClassError(LoopsiftError):
    """Cross-validation needs at least k examples of each class."""

    code = "TOO_FEW_PER_CLASS"


class EmptySpaceError(LoopsiftError):
    """Hyperparameter search got an empty candidate space."""

    code = "EMPTY_SPACE"


# --- loop -------------------------------------------------------------------


class EmptyClassError(LoopsiftError):
    """Balancing requires at least one example of each class."""

    code = "EMPTY_CLASS"


class ScorerUnavailableError(LoopsiftError):
    """The scoring backend failed; no partial weak labels were written."""

    code = "SCORER_UNAVAILABLE"


class QcLargerThanPoolError(LoopsiftError):
    """The QC overlap size exceeds the candidate pool."""

    code = "QC_LARGER_THAN_POOL"


class PendingQcError(LoopsiftError):
    """A cycle step requires QC annotations that are not complete yet."""

    code = "PENDING_QC"


# --- quality ----------------------------------------------------------------


class InsufficientDataError(LoopsiftError):
    """Reliability computation has no pairable values."""

    code = "INSUFFICIENT_DATA"


class MissingQcAnnotationsError(LoopsiftError):
    """QC items lack annotations from every queue participant."""

    code = "MISSING_QC_ANNOTATIONS"


# --- evaluation -------------------------------------------------------------


class LengthMismatchError(LoopsiftError):
    """Parallel label sequences differ in length."""

    code = "LENGTH_MISMATCH"


class EmptySliceError(LoopsiftError):
    """A cross-slice experiment slice has no examples."""

    code = "EMPTY_SLICE"


class EmptySideError(LoopsiftError):
    """A temporal cutoff leaves one side of the split empty."""

    code = "EMPTY_SIDE"


class NoToxicExamplesError(LoopsiftError):
    """The toxic-policy experiment needs at least one toxic example."""

    code = "NO_TOXIC_EXAMPLES"


class EmptyInputError(LoopsiftError):
    """A report was requested over zero predictions."""

    code = "EMPTY_INPUT"


class InvalidSpecError(LoopsiftError):
    """A synthetic corpus spec is internally inconsistent."""

    code = "INVALID_SPEC"


# --- service ----------------------------------------------------------------


class RetrainInProgressError(LoopsiftError):
    """A retrain was requested while one is already running."""

    code = "RETRAIN_IN_PROGRESS"


class NoModelError(LoopsiftError):
    """A report needs an active model and none exists."""

    code = "NO_MODEL"


class NoCheckedItemsError(LoopsiftError):
    """A report needs reviewed items and none exist."""

    code = "NO_CHECKED_ITEMS"
