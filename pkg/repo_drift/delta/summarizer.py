"""Delta summaries: deterministic heuristic backend and chat-service backend."""
import asyncio
import logging
import re
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..constants import (
    BACKEND_BUNDLE,
    BACKEND_HEURISTIC,
    BACKEND_SERVICE,
    DEFAULT_WORKERS,
    FORMATTING_ONLY_STATEMENT,
    MAX_DIFF_CHARS,
    MAX_SUMMARY_SYMBOLS,
    STATUS_ADDED,
    STATUS_DELETED,
    STATUS_RENAMED,
    SUMMARY_MAX_SENTENCES,
    SUMMARY_MIN_SENTENCES,
    SUMMARY_TEMPERATURE,
)
from ..exceptions import ConfigError, ServiceError
from ..llm.prompts import SUMMARY_FILE_PROMPT, SUMMARY_SYSTEM_PROMPT, fill
from ..llm.service import ChatServiceClient, system_user
from ..window.manifest import ChangeEntry
from .diff import UnifiedDiff, parse_unified_diff, truncate_diff
from .symbols import extract_symbols, is_formatting_only

_LOGGER = logging.getLogger(__name__)

_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")
_NO_CHANGE_RE = re.compile(r"no functional change", re.IGNORECASE)


@dataclass(frozen=True)
class DeltaSummary:
    path: str
    status: str
    text: str
    sentence_count: int
    formatting_only: bool = False
    backend: str = BACKEND_HEURISTIC
    old_path: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        record = {
            "path": self.path,
            "status": self.status,
            "text": self.text,
            "sentence_count": self.sentence_count,
            "formatting_only": self.formatting_only,
            "backend": self.backend,
        }
        if self.old_path is not None:
            record["old_path"] = self.old_path
        return record


def count_sentences(text: str) -> int:
    return len([part for part in _SENTENCE_SPLIT_RE.split(text.strip()) if part])


def summary_from_entry(entry: ChangeEntry) -> DeltaSummary:
    """Rebuild a summary from a bundle entry; formatting_only is read off the text."""
    text = entry.summary or ""
    return DeltaSummary(
        path=entry.path,
        status=entry.status,
        text=text,
        sentence_count=count_sentences(text),
        formatting_only=bool(_NO_CHANGE_RE.search(text)),
        backend=BACKEND_BUNDLE,
        old_path=entry.old_path,
    )


def _plural(count: int, word: str) -> str:
    return f"{count} {word}" if count == 1 else f"{count} {word}s"


def is_trivial(status: str, diff: UnifiedDiff) -> bool:
    return status == STATUS_DELETED or diff.deleted_file or not diff.hunks


def heuristic_summary(
    path: str, status: str, diff: UnifiedDiff, old_path: Optional[str] = None
) -> DeltaSummary:
    """Deterministic summary from hunk, symbol and line counts."""
    formatting_only = False
    hunks = _plural(len(diff.hunks), "hunk")

    if status == STATUS_DELETED or diff.deleted_file:
        if diff.removed_count:
            sentences = [f"Deleted file; {_plural(diff.removed_count, 'line')} removed."]
        else:
            sentences = ["Deleted file."]
    elif not diff.hunks:
        if status == STATUS_RENAMED or diff.is_rename:
            sentences = ["Rename only; content unchanged."]
        else:
            sentences = ["No textual change; content unchanged."]
    elif is_formatting_only(diff):
        formatting_only = True
        sentences = [
            FORMATTING_ONLY_STATEMENT,
            f"Only whitespace, quoting or comments differ across {hunks}.",
        ]
    else:
        if status == STATUS_ADDED or diff.new_file:
            opening = f"Adds a new file in {hunks}."
        elif status == STATUS_RENAMED and old_path:
            opening = f"Renamed from {old_path} and edited in {hunks}."
        else:
            opening = f"Modifies the file in {hunks}."

        symbols = extract_symbols(diff)[:MAX_SUMMARY_SYMBOLS]
        if symbols:
            touched = "Touches " + ", ".join(f"`{name}`" for name in symbols) + "."
        else:
            touched = "No named definitions appear in the changed lines."

        sentences = [
            opening,
            touched,
            f"Adds {_plural(diff.added_count, 'line')} and removes {_plural(diff.removed_count, 'line')}.",
        ]
        if diff.truncated:
            sentences.append("The diff was truncated before summarization.")

    text = " ".join(sentences)
    return DeltaSummary(
        path=path,
        status=status,
        text=text,
        sentence_count=count_sentences(text),
        formatting_only=formatting_only,
        backend=BACKEND_HEURISTIC,
        old_path=old_path,
    )


class DeltaSummarizer:
    """Summarizes per-file diffs with the service backend and heuristic fallback.

    Falls back to the heuristic backend when the service fails or keeps
    replying outside the sentence bounds, recording backend=heuristic.
    """

    def __init__(
        self,
        backend: str = BACKEND_HEURISTIC,
        client: Optional[ChatServiceClient] = None,
        max_diff_chars: int = MAX_DIFF_CHARS,
    ):
        if backend not in (BACKEND_HEURISTIC, BACKEND_SERVICE):
            raise ConfigError(f"unknown summary backend {backend!r}")
        if backend == BACKEND_SERVICE and client is None:
            raise ConfigError("service backend needs a ChatServiceClient")
        self.backend = backend
        self.client = client
        self.max_diff_chars = max_diff_chars

    def prepare(self, diff_text: str) -> UnifiedDiff:
        return parse_unified_diff(truncate_diff(diff_text, self.max_diff_chars))

    async def async_summarize(
        self, path: str, status: str, diff: UnifiedDiff, old_path: Optional[str] = None
    ) -> DeltaSummary:
        fallback = heuristic_summary(path, status, diff, old_path)
        if self.backend == BACKEND_HEURISTIC or fallback.formatting_only:
            return fallback

        repo_path = f"{old_path} -> {path}" if old_path else path
        messages = system_user(
            SUMMARY_SYSTEM_PROMPT, fill(SUMMARY_FILE_PROMPT, repo_path=repo_path, diff_text=diff.text)
        )
        lowest = 1 if is_trivial(status, diff) else SUMMARY_MIN_SENTENCES

        for attempt in range(2):
            try:
                reply = await self.client.async_complete(messages, SUMMARY_TEMPERATURE, attempt=attempt)
            except ServiceError as e:
                _LOGGER.warning("Summary service failed for %s, using heuristic: %s", path, e)
                return fallback

            text = " ".join(reply.split())
            sentences = count_sentences(text)
            if lowest <= sentences <= SUMMARY_MAX_SENTENCES:
                return DeltaSummary(
                    path=path,
                    status=status,
                    text=text,
                    sentence_count=sentences,
                    formatting_only=False,
                    backend=BACKEND_SERVICE,
                    old_path=old_path,
                )
            _LOGGER.debug("Summary for %s has %d sentences (attempt %d)", path, sentences, attempt + 1)

        _LOGGER.warning("Summary service kept violating sentence bounds for %s, using heuristic", path)
        return fallback

    async def async_summarize_entries(
        self, items: Sequence[Tuple[ChangeEntry, str]], workers: int = DEFAULT_WORKERS
    ) -> List[DeltaSummary]:
        """Summarize (entry, raw diff) pairs with at most `workers` requests in flight."""
        semaphore = asyncio.Semaphore(max(1, workers))

        async def one(entry: ChangeEntry, diff_text: str) -> DeltaSummary:
            async with semaphore:
                return await self.async_summarize(
                    entry.path, entry.status, self.prepare(diff_text), entry.old_path
                )

        summaries = await asyncio.gather(*(one(entry, text) for entry, text in items))
        _LOGGER.info("Summarized %d deltas (backend %s)", len(summaries), self.backend)
        return list(summaries)

    def summarize_entries(
        self, items: Sequence[Tuple[ChangeEntry, str]], workers: int = DEFAULT_WORKERS
    ) -> List[DeltaSummary]:
        return asyncio.run(self.async_summarize_entries(items, workers))


def summarize(
    path: str,
    status: str,
    diff: UnifiedDiff,
    backend: str = BACKEND_HEURISTIC,
    client: Optional[ChatServiceClient] = None,
    old_path: Optional[str] = None,
) -> DeltaSummary:
    if backend == BACKEND_HEURISTIC:
        return heuristic_summary(path, status, diff, old_path)
    summarizer = DeltaSummarizer(backend, client)
    return asyncio.run(summarizer.async_summarize(path, status, diff, old_path))
