"""Exceptions raised by repo_drift."""
from typing import Optional, Sequence


class DriftError(Exception):
    """Base class for every operational error of the toolkit."""


class GitCommandError(DriftError):
    """A git subprocess exited nonzero."""

    def __init__(self, command: Sequence[str], returncode: int, stderr: str):
        self.command = list(command)
        self.returncode = returncode
        self.stderr = stderr
        super().__init__(
            f"git exited with {returncode}: {' '.join(self.command)}\n{stderr.strip()}"
        )


class WindowError(DriftError):
    """The repository or a path is not usable for the requested window."""


class NameStatusParseError(DriftError):
    """A name-status line could not be parsed."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"name-status line {line_number}: {message}")


class ManifestError(DriftError):
    """A change manifest is inconsistent."""


class AliasConflictError(DriftError):
    """An alias map would be ambiguous or violate its invariants."""


class DiffParseError(DriftError):
    """A unified diff disagrees with its own hunk headers."""

    def __init__(self, hunk_index: Optional[int], message: str):
        self.hunk_index = hunk_index
        where = f"hunk {hunk_index}" if hunk_index is not None else "diff header"
        super().__init__(f"{where}: {message}")


class ServiceError(DriftError):
    """The chat-completion service failed or replied with something unusable."""


class DatasetError(DriftError):
    """Dataset synthesis was asked to do something outside its contract."""


class RecipeError(DatasetError):
    """A mix recipe asks for more examples than a pool holds."""

    def __init__(self, pool: str, requested: int, available: int):
        self.pool = pool
        self.requested = requested
        self.available = available
        super().__init__(
            f"{pool} pool has {available} examples but the recipe asks for {requested}"
        )


class PromptBudgetError(DriftError):
    """The character budget cannot hold the non-elidable prompt scaffold."""


class EvalItemError(DriftError):
    """A gold item is malformed for the requested scoring."""


class ConfigError(DriftError):
    """Configuration is missing or invalid."""
