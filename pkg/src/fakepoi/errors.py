"""Exception hierarchy shared by the pipeline stages and the CLI."""


class FakePoiError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ValidationError(FakePoiError, ValueError):
    """Invalid configuration or argument."""

    exit_code = 1


class DataError(FakePoiError):
    """Input data could not be read or is unusable."""

    exit_code = 2

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class MissingColumnError(DataError):
    def __init__(self, column):
        super().__init__(f"missing mandatory column {column!r}", column=column)


class DivergenceError(FakePoiError):
    """Training produced a non-finite loss, gradient or optimizer state."""

    exit_code = 3

    def __init__(self, message, epoch=None):
        super().__init__(message)
        self.epoch = epoch


class FormatVersionError(ValidationError):
    """A serialized model or encoder has an unsupported format version."""
