"""Exception hierarchy shared across the pipeline stages."""


class CorpusForgeError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(CorpusForgeError):
    """Invalid or unreadable configuration."""


class FetchError(CorpusForgeError):
    """Download failed after the configured number of attempts."""

    def __init__(self, message: str, attempts: int = 1):
        super().__init__(message)
        self.attempts = attempts


class AbsentProjectError(CorpusForgeError):
    """The requested project does not exist for this language (HTTP 404)."""


class IntegrityError(CorpusForgeError):
    """Downloaded file does not match the size advertised by the server."""


class DumpParseError(CorpusForgeError):
    """The dump archive is malformed or truncated."""


class ConsistencyError(CorpusForgeError):
    """Cross-stage inputs disagree (e.g. a bucket member with no signature)."""


class StageError(CorpusForgeError):
    """A pipeline stage failed; carries the stage name for exit reporting."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage '{stage}' failed: {message}")
        self.stage = stage
