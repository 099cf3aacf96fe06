"""Exception types shared across the package.

Everything raised on purpose derives from KbqaError so callers (CLI, HTTP
layer) can map failures to structured error payloads in one place.
"""

from __future__ import annotations


class KbqaError(Exception):
    """Base class for all package errors."""

    code = "INTERNAL"


class ParseError(KbqaError):
    """Malformed input: triples file, CoNLL-U source, query text, config."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyDataset(KbqaError):
    code = "PARSE_ERROR"


class UnsupportedFeature(KbqaError):
    """Query construct outside the supported SPARQL subset."""

    code = "PARSE_ERROR"


class EmptyQuestion(KbqaError):
    code = "PARSE_ERROR"


class NoNodes(KbqaError):
    """Query graph construction got no mentions at all."""

    code = "NO_MATCH"


class NoMatch(KbqaError):
    """No assignment of the query graph could be grounded in the KB."""

    code = "NO_MATCH"


class DatasetNotFound(KbqaError):
    code = "DATASET_NOT_FOUND"


class DuplicateId(KbqaError):
    code = "DUPLICATE_ID"


class LlmUnavailable(KbqaError):
    """The fallback model endpoint could not be reached or timed out."""

    code = "LLM_UNAVAILABLE"

    def __init__(self, message: str, trace=None):
        self.trace = trace
        super().__init__(message)


class RemoteServiceUnavailable(KbqaError):
    """A per-dataset remote extraction service failed to respond."""

    code = "REMOTE_SERVICE_UNAVAILABLE"


class UnknownPlaceholder(KbqaError):
    code = "PARSE_ERROR"


class ConfigError(KbqaError):
    code = "PARSE_ERROR"
