class QssError(Exception):
    """Base class for every error raised by the package."""


class InputError(QssError, ValueError):
    """Problem with user-provided input (files, documents, arguments)."""


class SeriesError(InputError):
    """A sampled series violates its shape, step or finiteness rules."""


class CsvFormatError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SpecSyntaxError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UsageError(InputError):
    """Bad command-line usage."""
