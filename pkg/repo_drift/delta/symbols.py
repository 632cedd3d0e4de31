"""Language-light symbol extraction and formatting-only detection."""
import posixpath
import re
from typing import Iterable, List, NamedTuple, Optional

from ..utils import split_lines
from .diff import UnifiedDiff

SYMBOL_RE = re.compile(r"\b(?:def|class|fn|func|function)\s+([A-Za-z_]\w*)")
TOP_LEVEL_RE = re.compile(
    r"^(?:export\s+)?(?:pub\s+)?(?:async\s+)?(?:def|class|fn|func|function)\s+([A-Za-z_]\w*)"
)
_BACKTICK_RE = re.compile(r"`([^`\s]+)`")


def _unique(names: Iterable[str]) -> List[str]:
    seen = set()
    ordered = []
    for name in names:
        if name not in seen:
            seen.add(name)
            ordered.append(name)
    return ordered


def extract_symbols(diff: UnifiedDiff) -> List[str]:
    """Symbol names from hunk context headers, then from changed lines."""
    names = []
    for hunk in diff.hunks:
        names.extend(SYMBOL_RE.findall(hunk.context_header))
    for hunk in diff.hunks:
        for line in hunk.removed_lines + hunk.added_lines:
            names.extend(SYMBOL_RE.findall(line))
    return _unique(names)


def top_level_symbols(content: str) -> List[str]:
    """Definitions starting at column 0 of a whole file."""
    return _unique(
        match.group(1)
        for match in (TOP_LEVEL_RE.match(line) for line in split_lines(content))
        if match
    )


def backticked_symbols(text: str) -> List[str]:
    """Backticked names in summary text, first occurrence order."""
    return _unique(_BACKTICK_RE.findall(text))


class LineSyntax(NamedTuple):
    """Comment and quote rules of one file type."""

    hash_comments: bool = False
    slash_comments: bool = False
    block_comments: bool = False
    quotes_equivalent: bool = False


_HASH_COMMENT_EXTS = {
    ".py", ".pyi", ".sh", ".bash", ".zsh", ".rb", ".toml", ".yaml", ".yml", ".pl", ".r", ".cfg",
}
_HASH_COMMENT_NAMES = {"Makefile", "Dockerfile", "CMakeLists.txt"}
_SLASH_COMMENT_EXTS = {
    ".c", ".h", ".cc", ".hh", ".cpp", ".hpp", ".cxx", ".cs", ".java", ".kt", ".kts", ".scala",
    ".swift", ".js", ".jsx", ".mjs", ".cjs", ".ts", ".tsx", ".go", ".rs", ".php", ".dart",
    ".scss", ".less",
}
_BLOCK_COMMENT_EXTS = _SLASH_COMMENT_EXTS | {".css"}
_QUOTE_EQUIVALENT_EXTS = {".py", ".pyi", ".js", ".jsx", ".mjs", ".cjs", ".ts", ".tsx", ".yaml", ".yml"}


def line_syntax(path: Optional[str]) -> LineSyntax:
    """Comment and quote rules by file extension; unknown types strip nothing."""
    if not path:
        return LineSyntax()
    name = posixpath.basename(path)
    ext = posixpath.splitext(name)[1].lower()
    return LineSyntax(
        hash_comments=ext in _HASH_COMMENT_EXTS or name in _HASH_COMMENT_NAMES,
        slash_comments=ext in _SLASH_COMMENT_EXTS,
        block_comments=ext in _BLOCK_COMMENT_EXTS,
        quotes_equivalent=ext in _QUOTE_EQUIVALENT_EXTS,
    )


def _is_word(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def _join_tokens(pieces: Iterable[str]) -> str:
    """Concatenate, keeping one space only where two identifier characters meet."""
    out: List[str] = []
    for piece in pieces:
        if not piece:
            continue
        if out and _is_word(out[-1][-1]) and _is_word(piece[0]):
            out.append(" ")
        out.append(piece)
    return "".join(out)


def canonical_line(line: str, path: Optional[str] = None) -> str:
    """Line with comments dropped, whitespace collapsed and quote style unified.

    Comment markers come from the file type of path: `#` for Python, shell,
    Ruby, TOML and YAML; `//` and `/* */` for C-family, JS/TS, Go, Rust and
    Java; only `/* */` for CSS. `#[` and `#!` never open a comment. Whitespace
    survives as one space between identifier characters. String contents are
    kept verbatim.
    """
    syntax = line_syntax(path)
    quote_chars = ("'", '"') if syntax.quotes_equivalent else ('"',)
    pieces: List[str] = []
    token: List[str] = []
    quote = None
    i = 0

    def flush():
        if token:
            pieces.append("".join(token))
            token.clear()

    while i < len(line):
        ch = line[i]
        if quote:
            if ch == "\\" and i + 1 < len(line):
                token.append(line[i:i + 2])
                i += 2
                continue
            if ch == quote:
                token.append('"' if syntax.quotes_equivalent else ch)
                quote = None
            else:
                token.append(ch)
            i += 1
            continue

        if ch in quote_chars:
            quote = ch
            token.append('"' if syntax.quotes_equivalent else ch)
        elif syntax.block_comments and line.startswith("/*", i):
            end = line.find("*/", i + 2)
            flush()
            if end < 0:
                break
            i = end + 2
            continue
        elif syntax.slash_comments and line.startswith("//", i):
            break
        elif syntax.hash_comments and ch == "#" and line[i + 1:i + 2] not in ("[", "!"):
            break
        elif ch.isspace():
            flush()
        else:
            token.append(ch)
        i += 1

    flush()
    return _join_tokens(pieces)


def is_formatting_only(diff: UnifiedDiff) -> bool:
    """True when every hunk's changes vanish under canonical_line.

    Needs at least one changed line; a hunk-free diff is not formatting-only.
    Removed and added lines are compared as joined token streams, so a
    rewrapped statement still matches.
    """
    path = diff.path or diff.old_path
    changed = False
    for hunk in diff.hunks:
        removed = hunk.removed_lines
        added = hunk.added_lines
        if not removed and not added:
            continue
        changed = True
        before = _join_tokens(canonical_line(line, path) for line in removed)
        after = _join_tokens(canonical_line(line, path) for line in added)
        if before != after:
            return False
    return changed
