"""Structured exceptions with stable machine-readable codes.

Every failure the toolkit can raise deliberately derives from EvalKitError.
The ``code`` attribute is what the CLI prints on stderr (``code=... msg=...``),
so codes are part of the external contract and must stay stable.
"""


class EvalKitError(Exception):
    """Base class for all toolkit errors."""

    code = "error"

    def __init__(self, message: str, *, row: int | None = None):
        # row = 1-based line number in the source file, when known
        if row is not None:
            message = f"{message} (row {row})"
        super().__init__(message)
        self.row = row


class MissingColumn(EvalKitError):
    code = "missing_column"


class UnparsableTimestamp(EvalKitError):
    code = "unparsable_timestamp"


class EndBeforeStart(EvalKitError):
    code = "end_before_start"


class EmptyLog(EvalKitError):
    code = "empty_log"


class DegenerateSplit(EvalKitError):
    code = "degenerate_split"


class LengthMismatch(EvalKitError):
    code = "length_mismatch"


class TooLarge(EvalKitError):
    code = "too_large"


class EmptySample(EvalKitError):
    code = "empty_sample"


class NonFiniteValue(EvalKitError):
    code = "non_finite_value"


class OriginAfterData(EvalKitError):
    code = "origin_after_data"


class HorizonTooSmall(EvalKitError):
    code = "horizon_too_small"


class InsufficientData(EvalKitError):
    code = "insufficient_data"


class InvalidOverride(EvalKitError):
    code = "invalid_override"


class NoDefinedTargets(EvalKitError):
    code = "no_defined_targets"


class EmptyTestSet(EvalKitError):
    code = "empty_test_set"
