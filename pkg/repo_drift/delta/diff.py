"""Unified diff parsing and truncation."""
import logging
import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ..alias.paths import normalize_path
from ..constants import MAX_DIFF_CHARS, TRUNCATION_MARKER
from ..exceptions import DiffParseError
from ..utils import split_lines
from ..window.name_status import unquote_git_path

_LOGGER = logging.getLogger(__name__)

_HUNK_RE = re.compile(r"^@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@ ?(.*)$")
_SIMILARITY_RE = re.compile(r"^similarity index (\d+)%$")

LINE_CONTEXT = " "
LINE_ADDED = "+"
LINE_REMOVED = "-"


@dataclass(frozen=True)
class Hunk:
    old_start: int
    old_count: int
    new_start: int
    new_count: int
    context_header: str = ""
    lines: Tuple[Tuple[str, str], ...] = ()

    @property
    def added_lines(self) -> List[str]:
        return [text for kind, text in self.lines if kind == LINE_ADDED]

    @property
    def removed_lines(self) -> List[str]:
        return [text for kind, text in self.lines if kind == LINE_REMOVED]


@dataclass(frozen=True)
class UnifiedDiff:
    """Parsed diff of one file. For renames old_path holds the X-side path."""

    path: Optional[str] = None
    old_path: Optional[str] = None
    hunks: Tuple[Hunk, ...] = ()
    truncated: bool = False
    similarity: Optional[int] = None
    new_file: bool = False
    deleted_file: bool = False
    binary: bool = False
    text: str = field(default="", repr=False, compare=False)

    @property
    def is_rename(self) -> bool:
        return self.old_path is not None and self.old_path != self.path

    @property
    def added_count(self) -> int:
        return sum(len(h.added_lines) for h in self.hunks)

    @property
    def removed_count(self) -> int:
        return sum(len(h.removed_lines) for h in self.hunks)


def truncate_diff(text: str, max_chars: int = MAX_DIFF_CHARS) -> str:
    """Cut text at the last complete line within max_chars and append the marker.

    Idempotent at a fixed cap: an already-truncated text is returned as is.
    """
    if max_chars <= 0:
        raise ValueError("max_chars must be positive")
    if len(text) <= max_chars:
        return text
    if text.endswith(TRUNCATION_MARKER) and len(text) - len(TRUNCATION_MARKER) <= max_chars:
        return text

    cut = text.rfind("\n", 0, max_chars)
    if cut == -1:
        return TRUNCATION_MARKER
    _LOGGER.debug("Truncating diff from %d to %d chars", len(text), cut + 1)
    return text[: cut + 1] + TRUNCATION_MARKER


def _strip_prefix(raw: str) -> Optional[str]:
    try:
        raw = unquote_git_path(raw.strip())
    except UnicodeError:
        return None
    if raw == "/dev/null":
        return None
    if raw[:2] in ("a/", "b/"):
        raw = raw[2:]
    return normalize_path(raw)


def _split_git_header(rest: str) -> Tuple[Optional[str], Optional[str]]:
    """Split 'a/X b/Y' from a `diff --git` line; ambiguous with spaces unless X == Y."""
    if len(rest) < 5:
        return None, None
    if rest.startswith('"'):
        end = rest.find('" ', 1)
        if end != -1:
            return _strip_prefix(rest[: end + 1]), _strip_prefix(rest[end + 2:])
    half = (len(rest) - 1) // 2
    if rest[half] == " " and rest[2:half] == rest[half + 3:]:
        return _strip_prefix(rest[:half]), _strip_prefix(rest[half + 1:])
    match = re.match(r"^(a/.*?) (b/.*)$", rest)
    if match:
        return _strip_prefix(match.group(1)), _strip_prefix(match.group(2))
    return None, None


@dataclass
class _Builder:
    path: Optional[str] = None
    old_path: Optional[str] = None
    similarity: Optional[int] = None
    new_file: bool = False
    deleted_file: bool = False
    binary: bool = False
    hunks: List[Hunk] = field(default_factory=list)
    header: Optional[Tuple[int, int, int, int, str]] = None
    lines: List[Tuple[str, str]] = field(default_factory=list)
    old_left: int = 0
    new_left: int = 0

    def close_hunk(self):
        if self.header is not None:
            self.hunks.append(Hunk(*self.header, lines=tuple(self.lines)))
        self.header = None
        self.lines = []
        self.old_left = self.new_left = 0

    @property
    def in_hunk(self) -> bool:
        return self.header is not None and (self.old_left > 0 or self.new_left > 0)


def parse_unified_diff(text: str) -> UnifiedDiff:
    """Parse git unified diff output into hunks.

    A trailing truncation marker marks the diff as truncated and tolerates an
    incomplete final hunk. Anything else that disagrees with a hunk header
    raises DiffParseError carrying the hunk index.
    """
    lines = split_lines(text)
    truncated = bool(lines) and lines[-1] == TRUNCATION_MARKER
    if truncated:
        lines = lines[:-1]

    state = _Builder()
    seen_section = False

    for line in lines:
        hunk_index = len(state.hunks)

        if state.in_hunk:
            kind = line[:1]
            if kind == "\\":
                continue
            if kind == LINE_ADDED:
                state.new_left -= 1
            elif kind == LINE_REMOVED:
                state.old_left -= 1
            elif kind == LINE_CONTEXT or line == "":
                kind = LINE_CONTEXT
                state.old_left -= 1
                state.new_left -= 1
            else:
                raise DiffParseError(hunk_index, f"hunk ended early at {line[:40]!r}")
            if state.old_left < 0 or state.new_left < 0:
                raise DiffParseError(hunk_index, "more lines than the @@ header declares")
            state.lines.append((kind, line[1:]))
            continue

        if line.startswith("\\"):
            continue

        match = _HUNK_RE.match(line)
        if match:
            state.close_hunk()
            old_start, old_count, new_start, new_count, context = match.groups()
            state.header = (
                int(old_start),
                1 if old_count is None else int(old_count),
                int(new_start),
                1 if new_count is None else int(new_count),
                context.strip(),
            )
            state.old_left, state.new_left = state.header[1], state.header[3]
            continue

        if line.startswith("@@"):
            raise DiffParseError(len(state.hunks), f"malformed hunk header {line!r}")

        if line.startswith("diff --git "):
            state.close_hunk()
            old, new = _split_git_header(line[len("diff --git "):])
            if not seen_section:
                state.path, state.old_path = new, old
            seen_section = True
        elif line.startswith("rename from "):
            state.old_path = _strip_prefix(line[len("rename from "):])
        elif line.startswith("rename to "):
            state.path = _strip_prefix(line[len("rename to "):])
        elif _SIMILARITY_RE.match(line):
            state.similarity = int(_SIMILARITY_RE.match(line).group(1))
        elif line.startswith("new file mode"):
            state.new_file = True
        elif line.startswith("deleted file mode"):
            state.deleted_file = True
        elif line.startswith("Binary files") or line == "GIT binary patch":
            state.binary = True
        elif line.startswith("--- ") and state.header is None:
            state.old_path = _strip_prefix(line[4:]) or state.old_path
        elif line.startswith("+++ ") and state.header is None:
            state.path = _strip_prefix(line[4:]) or state.path
        elif state.header is not None and line[:1] in (LINE_ADDED, LINE_REMOVED, LINE_CONTEXT):
            raise DiffParseError(hunk_index, "more lines than the @@ header declares")
        # index, mode and copy headers carry nothing we keep

    if state.in_hunk and not truncated:
        raise DiffParseError(len(state.hunks), "diff ended inside a hunk")
    state.close_hunk()

    if state.deleted_file and state.path is None:
        state.path = state.old_path
    if state.old_path == state.path:
        state.old_path = None
    if state.deleted_file:
        state.old_path = None

    return UnifiedDiff(
        path=state.path,
        old_path=state.old_path,
        hunks=tuple(state.hunks),
        truncated=truncated,
        similarity=state.similarity,
        new_file=state.new_file,
        deleted_file=state.deleted_file,
        binary=state.binary,
        text=text,
    )
