"""Training example and mix recipe types."""
from dataclasses import dataclass, replace
from typing import Any, Dict, Iterable, Mapping, Optional, Tuple

from ..constants import MODE_BASE
from ..exceptions import DatasetError
from ..schemas import EXAMPLE_RECORD_SCHEMA, validate
from ..utils import content_hash

ID_LENGTH = 16


def example_id(question: str, gold_paths: Iterable[str]) -> str:
    """Stable id: hash of the question and the sorted gold set."""
    return content_hash({"question": question, "gold": sorted(set(gold_paths))})[:ID_LENGTH]


@dataclass(frozen=True)
class QAExample:
    """A question with its gold path set, tagged by origin and synthesis mode."""

    id: str
    question: str
    gold_paths: Tuple[str, ...]
    origin: str
    mode: str = MODE_BASE
    anchor_path: Optional[str] = None

    @classmethod
    def create(
        cls,
        question: str,
        gold_paths: Iterable[str],
        origin: str,
        mode: str = MODE_BASE,
        anchor_path: Optional[str] = None,
    ) -> "QAExample":
        gold = tuple(sorted(set(gold_paths)))
        if not gold:
            raise DatasetError("examples need at least one gold path")
        return cls(example_id(question, gold), question, gold, origin, mode, anchor_path)

    def with_gold(self, gold_paths: Iterable[str]) -> "QAExample":
        gold = tuple(sorted(set(gold_paths)))
        return replace(self, gold_paths=gold, id=example_id(self.question, gold))

    def to_record(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "question": self.question,
            "relevant_file_paths": list(self.gold_paths),
            "origin": self.origin,
            "mode": self.mode,
        }

    @classmethod
    def from_record(cls, record: Mapping[str, Any], origin: Optional[str] = None) -> "QAExample":
        """Load a JSONL record; a missing id is derived from the content."""
        data = validate(EXAMPLE_RECORD_SCHEMA, dict(record), "example record", DatasetError)
        example = cls.create(
            data["question"],
            data["relevant_file_paths"],
            origin or data["origin"],
            data["mode"],
            data.get("anchor_path"),
        )
        if data.get("id"):
            example = replace(example, id=data["id"])
        return example


@dataclass(frozen=True)
class MixRecipe:
    new_count: int
    old_count: int
    seed: int = 0

    def __post_init__(self):
        if self.new_count < 0 or self.old_count < 0:
            raise DatasetError("recipe counts must be non-negative")

    @property
    def label(self) -> str:
        return f"{self.new_count}n/{self.old_count}o"

