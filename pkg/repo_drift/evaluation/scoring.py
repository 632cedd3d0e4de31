"""Exact Match / micro-averaged recall scoring over remapped predictions."""
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from ..alias.alias_map import AliasMap
from ..alias.paths import normalize_path
from ..alias.snapshot import SnapshotIndex
from ..constants import REASONS, SLICE_MIXED, SLICE_NEW, SLICE_OLD, SLICES
from ..exceptions import EvalItemError
from ..schemas import GOLD_RECORD_SCHEMA, PREDICTION_RECORD_SCHEMA, validate
from .predictions import parse_prediction, unique_strings
from .remap import remap_predictions

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class GoldItem:
    id: str
    question: str
    gold_paths: Tuple[str, ...]

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "GoldItem":
        data = validate(GOLD_RECORD_SCHEMA, dict(record), "gold record", EvalItemError)
        gold = set()
        for raw in data["gold_paths"]:
            path = normalize_path(raw)
            if path is None:
                raise EvalItemError(f"gold item {data['id']}: invalid gold path {raw!r}")
            gold.add(path)
        if not gold:
            raise EvalItemError(f"gold item {data['id']} has an empty gold set")
        return cls(data["id"], data["question"], tuple(sorted(gold)))


@dataclass(frozen=True)
class Prediction:
    """A model answer, either as raw output text or an explicit path list."""

    id: str
    raw_output: Optional[str] = None
    paths_list: Optional[Tuple[Any, ...]] = None

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "Prediction":
        data = validate(PREDICTION_RECORD_SCHEMA, dict(record), "prediction record", EvalItemError)
        if "raw_output" in data:
            return cls(data["id"], raw_output=data["raw_output"])
        return cls(data["id"], paths_list=tuple(data["paths"]))

    @classmethod
    def empty(cls, item_id: str) -> "Prediction":
        return cls(item_id, raw_output="[]")

    def paths(self) -> List[str]:
        if self.raw_output is not None:
            return parse_prediction(self.raw_output)
        return unique_strings(self.paths_list or ())

    @property
    def raw(self) -> str:
        if self.raw_output is not None:
            return self.raw_output
        return json.dumps(list(self.paths_list or ()), ensure_ascii=False)


@dataclass
class InstanceRecord:
    id: str
    raw_output: str
    parsed_paths: List[str]
    remapped: List[str]
    gold: List[str]
    reasons: List[Tuple[str, str]]
    em: int
    recall_numer: int
    recall_denom: int
    slice: Optional[str] = None

    @property
    def recall(self) -> float:
        return self.recall_numer / self.recall_denom

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "raw_output": self.raw_output,
            "parsed_paths": self.parsed_paths,
            "remapped": self.remapped,
            "gold": self.gold,
            "reasons": [{"path": path, "reason": reason} for path, reason in self.reasons],
            "em": self.em,
            "recall_numer": self.recall_numer,
            "recall_denom": self.recall_denom,
            "slice": self.slice,
        }


def score_instance(remapped: Iterable[str], gold: Iterable[str]) -> Tuple[int, int, int]:
    """Return (em, |remapped ∩ gold|, |gold|)."""
    predicted = set(remapped)
    gold_set = set(gold)
    if not gold_set:
        raise EvalItemError("gold set is empty")
    em = int(predicted == gold_set)
    return em, len(predicted & gold_set), len(gold_set)


def classify_slice(gold: Iterable[str], changed_ma: Set[str]) -> str:
    """NEW when every gold path is M/A in the window, OLD when none is, MIXED otherwise."""
    gold_set = set(gold)
    if not gold_set:
        raise EvalItemError("gold set is empty")
    if gold_set <= changed_ma:
        return SLICE_NEW
    if not gold_set & changed_ma:
        return SLICE_OLD
    return SLICE_MIXED


def _reason_counts(records: Iterable[InstanceRecord]) -> Dict[str, int]:
    counts = Counter(reason for record in records for _, reason in record.reasons)
    return {reason: counts.get(reason, 0) for reason in REASONS}


@dataclass
class SliceMetrics:
    n: int = 0
    em: Optional[float] = None
    mr: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "em": self.em, "mr": self.mr}


def _aggregate(records: Sequence[InstanceRecord]) -> SliceMetrics:
    if not records:
        return SliceMetrics()
    em = sum(record.em for record in records) / len(records)
    numer = sum(record.recall_numer for record in records)
    denom = sum(record.recall_denom for record in records)
    return SliceMetrics(len(records), em, numer / denom)


@dataclass
class EvalReport:
    n: int
    em: float
    mr: float
    per_slice: Dict[str, SliceMetrics] = field(default_factory=dict)
    reason_counts: Dict[str, int] = field(default_factory=dict)
    per_slice_reasons: Dict[str, Dict[str, int]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "em": self.em,
            "mr": self.mr,
            "per_slice": {name: metrics.to_dict() for name, metrics in self.per_slice.items()},
            "reason_counts": dict(self.reason_counts),
            "per_slice_reasons": {name: dict(counts) for name, counts in self.per_slice_reasons.items()},
        }


def score_corpus(records: Sequence[InstanceRecord]) -> EvalReport:
    """Corpus EM (mean of EM_i) and MR (Σ numer / Σ denom), overall and per slice."""
    if not records:
        raise EvalItemError("cannot score an empty corpus")

    overall = _aggregate(records)
    per_slice = {}
    per_slice_reasons = {}
    for name in SLICES:
        members = [record for record in records if record.slice == name]
        per_slice[name] = _aggregate(members)
        per_slice_reasons[name] = _reason_counts(members)

    return EvalReport(
        n=overall.n,
        em=overall.em,
        mr=overall.mr,
        per_slice=per_slice,
        reason_counts=_reason_counts(records),
        per_slice_reasons=per_slice_reasons,
    )


def score_prediction(
    item: GoldItem,
    prediction: Prediction,
    alias: AliasMap,
    snapshot: Optional[SnapshotIndex],
    changed_ma: Optional[Set[str]] = None,
    rescue: bool = True,
) -> InstanceRecord:
    """Parse, remap and score one prediction against its gold item."""
    parsed = prediction.paths()
    remap = remap_predictions(parsed, alias, snapshot, rescue=rescue)
    em, numer, denom = score_instance(remap.remapped, item.gold_paths)
    return InstanceRecord(
        id=item.id,
        raw_output=prediction.raw,
        parsed_paths=parsed,
        remapped=sorted(remap.remapped),
        gold=list(item.gold_paths),
        reasons=remap.reasons,
        em=em,
        recall_numer=numer,
        recall_denom=denom,
        slice=classify_slice(item.gold_paths, changed_ma) if changed_ma is not None else None,
    )


def evaluate(
    gold_items: Sequence[GoldItem],
    predictions: Mapping[str, Prediction],
    alias: AliasMap,
    snapshot: Optional[SnapshotIndex],
    changed_ma: Optional[Set[str]] = None,
    rescue: bool = True,
) -> Tuple[List[InstanceRecord], EvalReport]:
    """Score every gold item; items without a prediction are scored as []."""
    records = []
    missing = 0
    for item in gold_items:
        prediction = predictions.get(item.id)
        if prediction is None:
            missing += 1
            prediction = Prediction.empty(item.id)
        records.append(score_prediction(item, prediction, alias, snapshot, changed_ma, rescue))

    if missing:
        _LOGGER.warning("%d of %d gold items have no prediction; scored as []", missing, len(gold_items))

    report = score_corpus(records)
    _LOGGER.info("Scored %d items: EM %.4f, MR %.4f", report.n, report.em, report.mr)
    return records, report


def load_gold(records: Iterable[Mapping[str, Any]]) -> List[GoldItem]:
    """Gold items in record order; a repeated id raises EvalItemError."""
    items = [GoldItem.from_record(record) for record in records]
    seen: Set[str] = set()
    for item in items:
        if item.id in seen:
            raise EvalItemError(f"duplicate gold id {item.id}")
        seen.add(item.id)
    return items


def load_predictions(records: Iterable[Mapping[str, Any]]) -> Dict[str, Prediction]:
    """Index predictions by id; a repeated id keeps the last record."""
    predictions: Dict[str, Prediction] = {}
    for record in records:
        prediction = Prediction.from_record(record)
        if prediction.id in predictions:
            _LOGGER.warning("Duplicate prediction for %s; keeping the last one", prediction.id)
        predictions[prediction.id] = prediction
    return predictions
