"""Prediction adapters for the evaluator."""
from .adapters import (
    AdapterConfig,
    LexicalAdapter,
    ModelAdapter,
    PromptRecord,
    Question,
    ReplayAdapter,
    ServiceAdapter,
    answer,
    create_adapter,
    lexical_rank,
)

__all__ = [
    "AdapterConfig",
    "LexicalAdapter",
    "ModelAdapter",
    "PromptRecord",
    "Question",
    "ReplayAdapter",
    "ServiceAdapter",
    "answer",
    "create_adapter",
    "lexical_rank",
]
