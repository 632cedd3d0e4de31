"""NEW-pool question synthesis from diff summaries or full files."""
import asyncio
import logging
import re
from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence

import voluptuous as vol

from ..alias.paths import basename, normalize_path
from ..constants import (
    BACKEND_OFFLINE,
    BACKEND_SERVICE,
    DEFAULT_CODE_GLOBS,
    DEFAULT_MAX_FILES_PER_Q,
    DEFAULT_SYNTH_TARGET,
    DEFAULT_WORKERS,
    MODE_FULL_FILE,
    MODE_GIT_DIFF,
    ORIGIN_NEW,
    STATUS_ADDED,
    STATUS_MODIFIED,
    SYNTH_ATTEMPTS,
    SYNTH_TEMPERATURE,
)
from ..delta.summarizer import DeltaSummary
from ..delta.symbols import backticked_symbols, top_level_symbols
from ..exceptions import ConfigError, DatasetError, ServiceError
from ..llm.prompts import DIFF_SYNTH_PROMPT, FILE_SYNTH_PROMPT, fill
from ..llm.service import ChatServiceClient
from ..schemas import SYNTH_REPLY_SCHEMA, SYNTH_SAMPLE_SCHEMA
from ..utils import find_json_value
from .examples import QAExample

_LOGGER = logging.getLogger(__name__)

DIFF_QUESTION_TEMPLATE = "What changed in the behavior of `{symbol}` in this window?"
FILE_QUESTION_TEMPLATE = "Where is `{symbol}` defined and how does it work in the current code?"

_BACKTICK_SPAN_RE = re.compile(r"`[^`]*`")
_EXTENSIONS = sorted(
    {glob[2:] for glob in DEFAULT_CODE_GLOBS} | {"md", "rst", "txt", "json", "yaml", "yml", "toml", "cfg", "ini"},
    key=len,
    reverse=True,
)
_FILENAME_RE = re.compile(
    r"(?<![\w.])[\w\-]+(?:/[\w.\-]+)*\.(?:" + "|".join(_EXTENSIONS) + r")\b"
)
_IDENTIFIER_RE = re.compile(r"^[A-Za-z_][\w]*$")


@dataclass
class SynthStats:
    """Counters for everything synthesis dropped or skipped."""

    files: int = 0
    emitted: int = 0
    dropped_too_many_paths: int = 0
    dropped_no_symbol: int = 0
    dropped_path_in_question: int = 0
    dropped_invalid_path: int = 0
    dropped_malformed_sample: int = 0
    malformed_replies: int = 0
    skipped_files: int = 0

    def add(self, other: "SynthStats"):
        for key, value in asdict(other).items():
            setattr(self, key, getattr(self, key) + value)

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


def question_mentions_path(question: str, paths: Iterable[str] = ()) -> bool:
    """True if the question names a file outside backticks (symbols are fine)."""
    bare = _BACKTICK_SPAN_RE.sub(" ", question)
    if _FILENAME_RE.search(bare):
        return True
    for path in paths:
        if path in bare or (("." in basename(path)) and basename(path) in bare):
            return True
    return False


def _question_symbols(text: str) -> List[str]:
    return [name for name in backticked_symbols(text) if _IDENTIFIER_RE.match(name)]


def offline_diff_examples(
    path: str, summary: DeltaSummary, target: int, symbols: Optional[Sequence[str]] = None
) -> List[QAExample]:
    """One templated question per backticked symbol of the summary, anchored on path."""
    names = list(symbols) if symbols is not None else _question_symbols(summary.text)
    return [
        QAExample.create(
            DIFF_QUESTION_TEMPLATE.format(symbol=name), [path], ORIGIN_NEW, MODE_GIT_DIFF, anchor_path=path
        )
        for name in names[: max(0, target)]
    ]


def offline_file_examples(path: str, content: str, max_per_file: int) -> List[QAExample]:
    """One templated question per top-level definition of the file."""
    return [
        QAExample.create(
            FILE_QUESTION_TEMPLATE.format(symbol=name), [path], ORIGIN_NEW, MODE_FULL_FILE, anchor_path=path
        )
        for name in top_level_symbols(content)[: max(0, max_per_file)]
    ]


class QuestionSynthesizer:
    """Builds NEW examples with the offline templates or the chat service."""

    def __init__(
        self,
        backend: str = BACKEND_OFFLINE,
        client: Optional[ChatServiceClient] = None,
        max_files_per_q: int = DEFAULT_MAX_FILES_PER_Q,
    ):
        if backend not in (BACKEND_OFFLINE, BACKEND_SERVICE):
            raise ConfigError(f"unknown synthesis backend {backend!r}")
        if backend == BACKEND_SERVICE and client is None:
            raise ConfigError("service backend needs a ChatServiceClient")
        if max_files_per_q < 1:
            raise ConfigError("max_files_per_q must be at least 1")
        self.backend = backend
        self.client = client
        self.max_files_per_q = max_files_per_q
        self.stats = SynthStats()

    async def _request_samples(self, prompt: str, path: str) -> Optional[List[Any]]:
        """Ask for a {"samples": [...]} reply; one retry on malformed JSON."""
        messages = [{"role": "user", "content": prompt}]
        for attempt in range(SYNTH_ATTEMPTS):
            try:
                reply = await self.client.async_complete(messages, SYNTH_TEMPERATURE, attempt=attempt)
            except ServiceError as e:
                _LOGGER.warning("Synthesis request failed for %s: %s", path, e)
                return None
            data = find_json_value(reply, dict)
            try:
                return SYNTH_REPLY_SCHEMA(data)["samples"]
            except vol.Invalid:
                self.stats.malformed_replies += 1
                _LOGGER.debug("Malformed synthesis reply for %s (attempt %d)", path, attempt + 1)
        _LOGGER.warning("Skipping %s: synthesis reply stayed malformed", path)
        return None

    def _accept(self, sample: Any, path: str, mode: str, require_symbol: bool) -> Optional[QAExample]:
        try:
            sample = SYNTH_SAMPLE_SCHEMA(sample)
        except vol.Invalid:
            self.stats.dropped_malformed_sample += 1
            return None

        gold = []
        for raw in sample["relevant_file_paths"]:
            normalized = normalize_path(raw)
            if normalized is None:
                self.stats.dropped_invalid_path += 1
                return None
            gold.append(normalized)
        gold = sorted(set(gold))
        if not gold:
            self.stats.dropped_malformed_sample += 1
            return None
        if len(gold) > self.max_files_per_q:
            self.stats.dropped_too_many_paths += 1
            return None

        question = " ".join(sample["question"].split())
        if require_symbol and not backticked_symbols(question):
            self.stats.dropped_no_symbol += 1
            return None
        if question_mentions_path(question, gold + [path]):
            self.stats.dropped_path_in_question += 1
            return None
        return QAExample.create(question, gold, ORIGIN_NEW, mode, anchor_path=path)

    async def async_from_diff(self, summary: DeltaSummary, target: int = DEFAULT_SYNTH_TARGET) -> List[QAExample]:
        """Questions about one M/A file's change, conditioned on its summary."""
        if summary.status not in (STATUS_ADDED, STATUS_MODIFIED):
            raise DatasetError(f"{summary.path} is {summary.status}; NEW anchors must be M or A")
        self.stats.files += 1
        if target <= 0:
            return []

        if self.backend == BACKEND_OFFLINE:
            examples = offline_diff_examples(summary.path, summary, target)
        else:
            prompt = fill(
                DIFF_SYNTH_PROMPT,
                target=target,
                max_files_per_q=self.max_files_per_q,
                repo_path=summary.path,
                summary=summary.text,
            )
            samples = await self._request_samples(prompt, summary.path)
            if samples is None:
                self.stats.skipped_files += 1
                return []
            accepted = (self._accept(s, summary.path, MODE_GIT_DIFF, True) for s in samples)
            examples = [e for e in accepted if e is not None][:target]

        self.stats.emitted += len(examples)
        return examples

    async def async_from_file(self, path: str, content: str, max_per_file: int = DEFAULT_SYNTH_TARGET) -> List[QAExample]:
        """Questions conditioned on the whole file content at Y."""
        self.stats.files += 1
        if max_per_file <= 0 or not content.strip():
            return []

        if self.backend == BACKEND_OFFLINE:
            examples = offline_file_examples(path, content, max_per_file)
        else:
            prompt = fill(
                FILE_SYNTH_PROMPT,
                max_per_file=max_per_file,
                max_files_per_q=self.max_files_per_q,
                repo_path=path,
                content=content,
            )
            samples = await self._request_samples(prompt, path)
            if samples is None:
                self.stats.skipped_files += 1
                return []
            accepted = (self._accept(s, path, MODE_FULL_FILE, False) for s in samples)
            examples = [e for e in accepted if e is not None][:max_per_file]

        self.stats.emitted += len(examples)
        return examples

    async def async_from_diffs(
        self, summaries: Sequence[DeltaSummary], target: int, workers: int = DEFAULT_WORKERS
    ) -> List[QAExample]:
        semaphore = asyncio.Semaphore(max(1, workers))

        async def one(summary: DeltaSummary) -> List[QAExample]:
            async with semaphore:
                return await self.async_from_diff(summary, target)

        batches = await asyncio.gather(*(one(s) for s in summaries))
        return [example for batch in batches for example in batch]

    async def async_from_files(
        self, contents: Dict[str, str], max_per_file: int, workers: int = DEFAULT_WORKERS
    ) -> List[QAExample]:
        semaphore = asyncio.Semaphore(max(1, workers))

        async def one(path: str) -> List[QAExample]:
            async with semaphore:
                return await self.async_from_file(path, contents[path], max_per_file)

        batches = await asyncio.gather(*(one(p) for p in sorted(contents)))
        return [example for batch in batches for example in batch]


def synth_new_from_diff(
    path: str,
    summary: DeltaSummary,
    target: int = DEFAULT_SYNTH_TARGET,
    max_files_per_q: int = DEFAULT_MAX_FILES_PER_Q,
    backend: str = BACKEND_OFFLINE,
    client: Optional[ChatServiceClient] = None,
) -> List[QAExample]:
    if summary.path != path:
        raise DatasetError(f"summary for {summary.path} passed for {path}")
    synthesizer = QuestionSynthesizer(backend, client, max_files_per_q)
    return asyncio.run(synthesizer.async_from_diff(summary, target))


def synth_new_from_file(
    path: str,
    content: str,
    max_per_file: int = DEFAULT_SYNTH_TARGET,
    max_files_per_q: int = DEFAULT_MAX_FILES_PER_Q,
    backend: str = BACKEND_OFFLINE,
    client: Optional[ChatServiceClient] = None,
) -> List[QAExample]:
    synthesizer = QuestionSynthesizer(backend, client, max_files_per_q)
    return asyncio.run(synthesizer.async_from_file(path, content, max_per_file))
