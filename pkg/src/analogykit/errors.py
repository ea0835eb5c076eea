"""Exception hierarchy shared by all analogykit modules."""


class AnalogyError(Exception):
    """Base class for all analogykit errors."""


class DimensionMismatch(AnalogyError):
    """Operands that must share a dimension do not."""


class ValidationError(AnalogyError):
    """Input data violates a structural constraint."""


class UnknownSymbol(AnalogyError):
    """A sequence letter or alignment symbol is not part of the alphabet."""


class UnknownClass(AnalogyError):
    """A class identifier is not part of the dataset's class set."""


class InvalidN(ValidationError):
    """Requested number of base prototypes is out of range."""


class CacheError(ValidationError):
    """A precomputed-matrix cache file is malformed or corrupted."""


class RaggedRow(ValidationError):
    """A CSV row has the wrong number of cells."""

    def __init__(self, line_number, expected, got):
        super().__init__(
            f"line {line_number}: expected {expected} cells, got {got}")
        self.line_number = line_number
        self.expected = expected
        self.got = got


class MissingClassColumn(ValidationError):
    """The designated class column does not exist in the table."""


class EmptyTable(ValidationError):
    """A table with no data rows where rows are required."""


class UnknownValue(ValidationError):
    """A cell value not covered by the feature schema (strict mode)."""

    def __init__(self, column, value):
        super().__init__(f"column {column!r}: value {value!r} not in schema")
        self.column = column
        self.value = value


class InvalidSize(ValidationError):
    """A split size outside the valid range."""
