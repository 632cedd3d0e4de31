"""Prediction adapters: replay, chat service and the lexical baseline."""
import asyncio
import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from ..alias.snapshot import SnapshotIndex
from ..constants import (
    ADAPTER_LEXICAL,
    ADAPTER_REPLAY,
    ADAPTER_SERVICE,
    DEFAULT_SERVICE_RETRIES,
    DEFAULT_SERVICE_TIMEOUT,
    DEFAULT_WORKERS,
    LEXICAL_MIN_SCORE,
    LEXICAL_TOP_K,
)
from ..exceptions import ConfigError, EvalItemError
from ..lexical import rank_paths
from ..llm.cache import ResponseCache
from ..llm.prompts import ANSWER_SYSTEM_PROMPT, QUESTION_TEMPLATE, fill
from ..llm.service import ChatServiceClient, system_user
from ..schemas import (
    ADAPTER_CONFIG_SCHEMA,
    PREDICTION_RECORD_SCHEMA,
    PROMPT_RECORD_SCHEMA,
    QUESTION_RECORD_SCHEMA,
    load_records,
    validate,
)

_LOGGER = logging.getLogger(__name__)

EMPTY_ANSWER = "[]"


@dataclass(frozen=True)
class AdapterConfig:
    """Settings for one adapter kind; only that kind's settings are required."""

    kind: str
    endpoint: Optional[str] = None
    model: Optional[str] = None
    api_key: Optional[str] = None
    replay_file: Optional[str] = None
    cache_dir: Optional[str] = None
    timeout: int = DEFAULT_SERVICE_TIMEOUT
    retries: int = DEFAULT_SERVICE_RETRIES
    lexical_top_k: int = LEXICAL_TOP_K
    lexical_min_score: float = LEXICAL_MIN_SCORE

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "AdapterConfig":
        values = validate(
            ADAPTER_CONFIG_SCHEMA,
            {key: value for key, value in data.items() if value is not None},
            "adapter config",
        )
        config = cls(**values)
        config.check()
        return config

    @classmethod
    def from_env(
        cls, cache_dir: Optional[str] = None, environ: Optional[Mapping[str, str]] = None
    ) -> "AdapterConfig":
        """Service config from DRIFT_LLM_* variables."""
        client = ChatServiceClient.from_env(environ=environ)
        return cls(
            ADAPTER_SERVICE,
            endpoint=client.endpoint,
            model=client.model,
            api_key=client.api_key,
            cache_dir=cache_dir,
            timeout=client.timeout,
            retries=client.retries,
        )

    def check(self):
        if self.kind == ADAPTER_REPLAY and not self.replay_file:
            raise ConfigError("replay adapter needs replay_file")
        if self.kind == ADAPTER_SERVICE and not (self.endpoint and self.model):
            raise ConfigError("service adapter needs endpoint and model")


@dataclass(frozen=True)
class Question:
    id: str
    question: str

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "Question":
        data = validate(QUESTION_RECORD_SCHEMA, dict(record), "question record", EvalItemError)
        return cls(data["id"], data["question"])


@dataclass(frozen=True)
class PromptRecord:
    """A stored system/user prompt pair, as written by the icl command."""

    id: str
    system_text: str
    user_text: str
    included_paths: Tuple[str, ...] = ()

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "PromptRecord":
        data = validate(PROMPT_RECORD_SCHEMA, dict(record), "prompt record", EvalItemError)
        return cls(data["id"], data["system"], data["user"], tuple(data["included_paths"]))


def lexical_rank(
    question: str,
    snapshot: SnapshotIndex,
    contents: Optional[Mapping[str, str]] = None,
    top_k: int = LEXICAL_TOP_K,
    min_score: float = LEXICAL_MIN_SCORE,
) -> List[Tuple[str, float]]:
    """Snapshot paths scored against the question, best first."""
    if not len(snapshot):
        raise EvalItemError("lexical ranking needs a nonempty snapshot")
    return rank_paths(question, snapshot.paths, contents, top_k, min_score)


class ModelAdapter:
    """Base class: turns a question (and optional prompt) into raw model output."""

    kind = ""

    async def async_answer(self, question: Question, prompt: Optional[Any] = None) -> str:
        raise NotImplementedError

    async def async_answer_all(
        self,
        questions: Sequence[Question],
        prompts: Optional[Mapping[str, Any]] = None,
        workers: int = DEFAULT_WORKERS,
    ) -> List[Dict[str, str]]:
        """Answer every question with bounded concurrency; output keeps input order."""
        prompts = prompts or {}
        semaphore = asyncio.Semaphore(max(1, workers))

        async def one(question: Question) -> Dict[str, str]:
            async with semaphore:
                raw = await self.async_answer(question, prompts.get(question.id))
            return {"id": question.id, "raw_output": raw}

        records = await asyncio.gather(*(one(q) for q in questions))
        _LOGGER.info("%s adapter answered %d questions", self.kind, len(records))
        return list(records)

    def answer_all(
        self,
        questions: Sequence[Question],
        prompts: Optional[Mapping[str, Any]] = None,
        workers: int = DEFAULT_WORKERS,
    ) -> List[Dict[str, str]]:
        return asyncio.run(self.async_answer_all(questions, prompts, workers))


class ReplayAdapter(ModelAdapter):
    kind = ADAPTER_REPLAY

    def __init__(self, outputs: Mapping[str, str]):
        self.outputs = dict(outputs)

    @classmethod
    def load(cls, path: str) -> "ReplayAdapter":
        outputs = {}
        for record in load_records(path, PREDICTION_RECORD_SCHEMA, "replay", ConfigError):
            if "raw_output" in record:
                outputs[record["id"]] = record["raw_output"]
            else:
                outputs[record["id"]] = json.dumps(record["paths"], ensure_ascii=False)
        return cls(outputs)

    async def async_answer(self, question: Question, prompt: Optional[Any] = None) -> str:
        raw = self.outputs.get(question.id)
        if raw is None:
            _LOGGER.debug("No replay output for %s", question.id)
            return EMPTY_ANSWER
        return raw


class ServiceAdapter(ModelAdapter):
    """Sends the ICL prompt, or the bare question under the strict output rules."""

    kind = ADAPTER_SERVICE

    def __init__(self, client: ChatServiceClient):
        self.client = client

    @staticmethod
    def messages_for(question: Question, prompt: Optional[Any] = None) -> List[Dict[str, str]]:
        if prompt is None:
            return system_user(ANSWER_SYSTEM_PROMPT, fill(QUESTION_TEMPLATE, question=question.question))
        return system_user(prompt.system_text, prompt.user_text)

    async def async_answer(self, question: Question, prompt: Optional[Any] = None) -> str:
        return await self.client.async_complete(self.messages_for(question, prompt))


class LexicalAdapter(ModelAdapter):
    kind = ADAPTER_LEXICAL

    def __init__(
        self,
        snapshot: SnapshotIndex,
        contents: Optional[Mapping[str, str]] = None,
        top_k: int = LEXICAL_TOP_K,
        min_score: float = LEXICAL_MIN_SCORE,
    ):
        self.snapshot = snapshot
        self.contents = contents
        self.top_k = top_k
        self.min_score = min_score

    def rank(self, question: str) -> List[Tuple[str, float]]:
        return lexical_rank(question, self.snapshot, self.contents, self.top_k, self.min_score)

    async def async_answer(self, question: Question, prompt: Optional[Any] = None) -> str:
        return json.dumps([path for path, _ in self.rank(question.question)])


def create_adapter(
    cfg: AdapterConfig,
    snapshot: Optional[SnapshotIndex] = None,
    contents: Optional[Mapping[str, str]] = None,
) -> ModelAdapter:
    """Build the adapter named by cfg.kind after validating cfg."""
    cfg.check()
    if cfg.kind == ADAPTER_REPLAY:
        return ReplayAdapter.load(cfg.replay_file)
    if cfg.kind == ADAPTER_SERVICE:
        client = ChatServiceClient(
            cfg.endpoint,
            cfg.model,
            api_key=cfg.api_key,
            timeout=cfg.timeout,
            retries=cfg.retries,
            cache=ResponseCache(cfg.cache_dir) if cfg.cache_dir else None,
        )
        return ServiceAdapter(client)
    if cfg.kind == ADAPTER_LEXICAL:
        if snapshot is None:
            raise ConfigError("lexical adapter needs a snapshot")
        return LexicalAdapter(snapshot, contents, cfg.lexical_top_k, cfg.lexical_min_score)
    raise ConfigError(f"unknown adapter kind {cfg.kind!r}")


def answer(
    question: Question,
    prompt: Optional[Any],
    cfg: AdapterConfig,
    snapshot: Optional[SnapshotIndex] = None,
    contents: Optional[Mapping[str, str]] = None,
) -> str:
    """Raw output of the configured adapter for one question."""
    adapter = create_adapter(cfg, snapshot, contents)
    return asyncio.run(adapter.async_answer(question, prompt))
