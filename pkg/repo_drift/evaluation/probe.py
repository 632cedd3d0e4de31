"""Forgetting probe: raw old-name emissions over structurally changed gold labels."""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Sequence

from ..alias.alias_map import AliasMap
from ..alias.paths import normalize_path
from ..alias.snapshot import SnapshotIndex
from ..constants import (
    PROBE_CLASSES,
    PROBE_DELETED_OLD,
    PROBE_NEW_NAME,
    PROBE_OLD_NAME,
    PROBE_UNKNOWN,
)
from ..exceptions import EvalItemError
from .scoring import GoldItem, InstanceRecord, Prediction, score_corpus, score_prediction

_LOGGER = logging.getLogger(__name__)


def probe_classify(raw: str, alias: AliasMap, snapshot: SnapshotIndex) -> str:
    """Classify one predicted path without remapping it.

    deleted_old: in the deleted set. old_name: a rename source absent from Y.
    new_name: present at Y and the target of some rename. unknown otherwise.
    """
    path = normalize_path(raw)
    if path is None:
        return PROBE_UNKNOWN
    if path in alias.deleted:
        return PROBE_DELETED_OLD
    if path in alias.renames and path not in snapshot:
        return PROBE_OLD_NAME
    if path in snapshot and path in alias.rename_targets:
        return PROBE_NEW_NAME
    return PROBE_UNKNOWN


@dataclass
class ProbeReport:
    n: int
    counts: Dict[str, int]
    total: int
    emission_rate: float
    old_em: float
    old_mr: float
    records: List[InstanceRecord] = field(default_factory=list, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "counts": dict(self.counts),
            "total": self.total,
            "emission_rate": self.emission_rate,
            "old_em": self.old_em,
            "old_mr": self.old_mr,
        }


def check_probe_items(gold_items: Sequence[GoldItem], alias: AliasMap):
    """Every probe gold path must have been renamed or deleted in the window."""
    for item in gold_items:
        outside = [path for path in item.gold_paths if path not in alias]
        if outside:
            raise EvalItemError(
                f"probe item {item.id} has gold paths outside the alias domain: {', '.join(outside)}"
            )


def probe_score(
    gold_items: Sequence[GoldItem],
    predictions: Mapping[str, Prediction],
    alias: AliasMap,
    snapshot: SnapshotIndex,
) -> ProbeReport:
    """Count old-name emissions and score old-side EM/MR with no remap.

    emission_rate = (old_name + deleted_old) / all predicted paths, 0 when
    nothing was predicted; new_name emissions do not count.
    """
    if not gold_items:
        raise EvalItemError("probe set is empty")
    check_probe_items(gold_items, alias)

    counts: Counter = Counter()
    records = []
    no_alias = AliasMap.empty()
    for item in gold_items:
        prediction = predictions.get(item.id) or Prediction.empty(item.id)
        for path in prediction.paths():
            counts[probe_classify(path, alias, snapshot)] += 1
        records.append(score_prediction(item, prediction, no_alias, None, rescue=False))

    total = sum(counts.values())
    emitted = counts[PROBE_OLD_NAME] + counts[PROBE_DELETED_OLD]
    rate = emitted / total if total else 0.0
    old_side = score_corpus(records)

    report = ProbeReport(
        n=len(gold_items),
        counts={name: counts.get(name, 0) for name in PROBE_CLASSES},
        total=total,
        emission_rate=rate,
        old_em=old_side.em,
        old_mr=old_side.mr,
        records=records,
    )
    _LOGGER.info("Probe over %d items: emission rate %.4f of %d paths", report.n, rate, total)
    return report
