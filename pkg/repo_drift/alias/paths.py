"""Root-relative path normalization."""
from typing import Any, Optional


def normalize_path(raw: Any) -> Optional[str]:
    """Normalize a raw path string to a root-relative, forward-slash path.

    Backslashes become "/", repeated slashes collapse, and leading "./" or "/"
    prefixes are dropped. Returns None (invalid) for non-strings, empty
    results or any ".." segment.
    """
    if not isinstance(raw, str):
        return None

    segments = [segment.strip() for segment in raw.replace("\\", "/").split("/")]
    segments = [segment for segment in segments if segment not in ("", ".")]
    if not segments or ".." in segments:
        return None

    return "/".join(segments)


def basename(path: str) -> str:
    return path.rsplit("/", 1)[-1]
