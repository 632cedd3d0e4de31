import hashlib
import json
import os
import tempfile
from typing import Any, Dict, Iterable, List


def canonical_json(value: Any) -> str:
    """Serialize to a stable single-line JSON string (sorted keys, no spaces)."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def content_hash(value: Any) -> str:
    """SHA-256 hex digest of bytes, UTF-8 text or the canonical JSON of anything else."""
    if isinstance(value, bytes):
        data = value
    elif isinstance(value, str):
        data = value.encode("utf-8")
    else:
        data = canonical_json(value).encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def file_sha256(path: str) -> str:
    """Streamed SHA-256 of a file."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def atomic_write_text(path: str, text: str):
    """Write text to path via a temp file in the same directory and os.replace."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def split_lines(text: str) -> List[str]:
    """Split on "\\n" only; str.splitlines also breaks on \\x0c, \\x1c-\\x1e, \\x85 and U+2028/U+2029."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def dumps_jsonl(records: Iterable[Dict[str, Any]]) -> str:
    return "".join(json.dumps(record, ensure_ascii=False) + "\n" for record in records)


def loads_jsonl(text: str) -> List[Dict[str, Any]]:
    """Parse one JSON object per "\\n"-terminated line; blank lines are skipped."""
    records = []
    for number, line in enumerate(split_lines(text), start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as e:
            raise ValueError(f"line {number}: invalid JSON ({e.msg})") from e
    return records


def read_jsonl(path: str) -> List[Dict[str, Any]]:
    with open(path, "r", encoding="utf-8") as f:
        return loads_jsonl(f.read())


def write_jsonl(path: str, records: Iterable[Dict[str, Any]]):
    atomic_write_text(path, dumps_jsonl(records))


def read_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_json(path: str, value: Any):
    atomic_write_text(path, json.dumps(value, indent=2, ensure_ascii=False) + "\n")


_DECODER = json.JSONDecoder()


def find_json_value(text: str, value_type: type) -> Any:
    """Return the first JSON value of value_type (list or dict) embedded in text, else None."""
    opener = "[" if value_type is list else "{"
    position = text.find(opener)
    while position != -1:
        try:
            value, _ = _DECODER.raw_decode(text, position)
        except json.JSONDecodeError:
            value = None
        if isinstance(value, value_type):
            return value
        position = text.find(opener, position + 1)
    return None
