"""Parser for `git diff --name-status` output."""
import logging
import re
from typing import List

from ..alias.paths import normalize_path
from ..constants import STATUS_COPIED, STATUS_RENAMED
from ..exceptions import NameStatusParseError
from ..utils import split_lines
from .manifest import ChangeEntry

_LOGGER = logging.getLogger(__name__)

_STATUS_RE = re.compile(r"^([AMD])$|^([RC])(\d{1,3})$")
_ESCAPE_RE = re.compile(r'\\([0-7]{3}|[abfnrtv"\\])')
_SIMPLE_ESCAPES = {
    "a": b"\a", "b": b"\b", "f": b"\f", "n": b"\n", "r": b"\r",
    "t": b"\t", "v": b"\v", '"': b'"', "\\": b"\\",
}


def unquote_git_path(field: str) -> str:
    """Undo git's core.quotepath C-style quoting ("dir/\\303\\251.py").

    Raises UnicodeDecodeError when the unescaped bytes are not UTF-8.
    """
    if len(field) < 2 or not (field.startswith('"') and field.endswith('"')):
        return field

    body = field[1:-1]
    out = bytearray()
    position = 0
    for match in _ESCAPE_RE.finditer(body):
        out += body[position:match.start()].encode("utf-8")
        sequence = match.group(1)
        if len(sequence) == 3:
            out.append(int(sequence, 8) & 0xFF)
        else:
            out += _SIMPLE_ESCAPES[sequence]
        position = match.end()
    out += body[position:].encode("utf-8")
    return out.decode("utf-8")


def _parse_path(field: str, line_number: int) -> str:
    try:
        raw = unquote_git_path(field)
        raw.encode("utf-8")
    except UnicodeError as e:
        raise NameStatusParseError(line_number, f"path is not valid UTF-8: {field!r}") from e

    path = normalize_path(raw)
    if path is None:
        raise NameStatusParseError(line_number, f"invalid path {field!r}")
    return path


def parse_name_status(text: str) -> List[ChangeEntry]:
    """Parse tab-separated name-status text into change entries.

    Rnnn lines become renames with their score; Cnnn copies become adds of
    the destination. Unknown status codes and wrong field counts are errors.
    """
    entries: List[ChangeEntry] = []

    for line_number, line in enumerate(split_lines(text), start=1):
        if not line.strip():
            continue

        fields = line.split("\t")
        match = _STATUS_RE.match(fields[0])
        if not match:
            raise NameStatusParseError(line_number, f"unknown status code {fields[0]!r}")

        simple, kind, score = match.groups()
        if simple:
            if len(fields) != 2:
                raise NameStatusParseError(
                    line_number, f"status {simple} expects 1 path, got {len(fields) - 1}"
                )
            entries.append(ChangeEntry(simple, _parse_path(fields[1], line_number)))
            continue

        if len(fields) != 3:
            raise NameStatusParseError(
                line_number, f"status {fields[0]} expects 2 paths, got {len(fields) - 1}"
            )
        rename_score = int(score)
        if rename_score > 100:
            raise NameStatusParseError(line_number, f"score {rename_score} exceeds 100")
        old_path = _parse_path(fields[1], line_number)
        new_path = _parse_path(fields[2], line_number)

        if kind == STATUS_COPIED:
            _LOGGER.debug("Copy %s -> %s recorded as add of destination", old_path, new_path)
            entries.append(ChangeEntry.added(new_path))
        elif kind == STATUS_RENAMED:
            if old_path == new_path:
                raise NameStatusParseError(line_number, f"rename of {old_path} onto itself")
            entries.append(ChangeEntry.renamed(old_path, new_path, rename_score))

    _LOGGER.debug("Parsed %d name-status entries", len(entries))
    return entries
