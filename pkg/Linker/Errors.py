"""Exception hierarchy for the linking engine.

Everything the CLI should report as an input problem (exit code 1) derives
from InputError; other LinkerErrors are internal (exit code 2).
"""

from typing import Optional


class LinkerError(Exception):
    """Base class for all engine errors."""


class InputError(LinkerError):
    """Bad user-supplied input: files, records, queries, config."""


class RecordParseError(InputError):
    """A serialized record could not be parsed."""

    def __init__(self, field: str, message: str = "", line_no: Optional[int] = None):
        self.field = field
        self.line_no = line_no
        where = f"line {line_no}: " if line_no is not None else ""
        detail = f": {message}" if message else ""
        super().__init__(f"{where}invalid field '{field}'{detail}")


class RecordValidationError(InputError):
    """A record parsed but violates a domain invariant."""


class AliasTableError(InputError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"alias table line {line_no}: {message}")


class IndexBuildError(InputError):
    """Raised while building an index, e.g. on duplicate paper ids."""


class EmptyQueryError(InputError):
    """Every subquery is empty: there is nothing to search for."""

    def __init__(self, message: str = "no extractable metadata"):
        super().__init__(message)


class ConfigError(InputError):
    """Invalid configuration file or option value."""


class DatasetError(InputError):
    """Evaluation dataset problems (missing gold ids, unreadable files)."""


class SnapshotError(InputError):
    """Index snapshot is unreadable or has an unsupported version."""


class PaperLookupError(LinkerError, KeyError):
    """Unknown paper id."""

    def __init__(self, paper_id: str):
        self.paper_id = paper_id
        super().__init__(f"unknown paper id: {paper_id}")

    def __str__(self) -> str:
        return self.args[0]


class ServiceError(LinkerError):
    """A running link service could not be reached or answered with an error."""

    def __init__(self, message: str, status_code: Optional[int] = None):
        self.status_code = status_code
        super().__init__(message)
