"""Exception hierarchy shared across the harness."""

from __future__ import annotations


class PatchgateError(Exception):
    """Base class for all harness errors."""


class CorpusNotFoundError(PatchgateError):
    """A required corpus file or directory does not exist."""


class ManifestParseError(PatchgateError):
    """A testcases manifest is malformed."""


class ValidationError(PatchgateError):
    """Corpus contents violate an invariant (duplicates, empty cases, ...)."""


class EmptyCorpusError(PatchgateError):
    """Corpus loading produced no problems."""


class TemplateError(PatchgateError):
    """Prompt template has the wrong number of placeholders."""


class CassetteMiss(PatchgateError):
    """Replay mode requested a key absent from the cassette."""

    def __init__(self, key: str, context: str = "") -> None:
        self.key = key
        self.context = context
        msg = f"cassette miss for key {key}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class CassetteConflict(PatchgateError):
    """Recording a different response under an already-recorded key."""


class ProviderError(PatchgateError):
    """Chat-completion provider failed after bounded retries."""


class ExecutionEnvironmentError(PatchgateError):
    """The sandbox subprocess could not be launched."""


class ProtocolError(PatchgateError):
    """The sandbox emitted output that violates the wire protocol."""


class ConfigError(PatchgateError):
    """Invalid run or gate configuration."""
