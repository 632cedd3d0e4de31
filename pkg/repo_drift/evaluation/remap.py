"""Alias-aware remapping of predicted paths and the diagnostic rescues."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from rapidfuzz.distance import Levenshtein

from ..alias.alias_map import AliasMap, Resolution, resolve
from ..alias.paths import basename, normalize_path
from ..alias.snapshot import SnapshotIndex
from ..constants import (
    FUZZY_RESCUE_THRESHOLD,
    REASON_ALIAS_DELETED,
    REASON_ALIAS_RENAME,
    REASON_DIRECT,
    REASON_INVALID,
    REASON_RESCUED_FUZZY,
    REASON_RESCUED_SUFFIX,
    REASON_UNKNOWN,
)

_LOGGER = logging.getLogger(__name__)


def edit_distance(a: str, b: str) -> int:
    return Levenshtein.distance(a, b)


def similarity(a: str, b: str) -> float:
    """1 - distance / longer length; two empty strings are identical."""
    return Levenshtein.normalized_similarity(a, b)


def _exact_similarity(a: str, b: str) -> Fraction:
    longest = max(len(a), len(b))
    if longest == 0:
        return Fraction(1)
    return Fraction(longest - Levenshtein.distance(a, b), longest)


def rescue_classify(
    path: str, snapshot: SnapshotIndex, threshold: float = FUZZY_RESCUE_THRESHOLD
) -> str:
    """Diagnostic tag for a path that is neither at Y nor in the alias domain.

    rescued_suffix: exactly one snapshot path shares its basename.
    rescued_fuzzy: unique best full-path similarity at or above threshold.
    Similarities are compared as exact fractions so a score equal to the
    threshold qualifies.
    """
    if len(snapshot.with_basename(basename(path))) == 1:
        return REASON_RESCUED_SUFFIX

    cutoff = Fraction(repr(threshold))
    best = None
    best_count = 0
    for other in snapshot:
        longest = max(len(other), len(path))
        # distance is at least the length gap
        if longest and Fraction(longest - abs(len(other) - len(path)), longest) < cutoff:
            continue
        score = _exact_similarity(path, other)
        if best is None or score > best:
            best, best_count = score, 1
        elif score == best:
            best_count += 1

    if best is not None and best >= cutoff and best_count == 1:
        return REASON_RESCUED_FUZZY
    return REASON_UNKNOWN


@dataclass
class RemapResult:
    remapped: List[str] = field(default_factory=list)
    reasons: List[Tuple[str, str]] = field(default_factory=list)


def remap_predictions(
    paths: Sequence[str],
    alias: AliasMap,
    snapshot: Optional[SnapshotIndex],
    rescue: bool = True,
) -> RemapResult:
    """Normalize, keep paths at Y, resolve the rest through alias, drop leftovers.

    Snapshot precedence: a path that exists at Y is direct even if it is also
    an alias key. With snapshot=None nothing is clamped (no-remap scoring).
    """
    result = RemapResult()
    kept = set()

    def keep(path: str):
        if path not in kept:
            kept.add(path)
            result.remapped.append(path)

    for raw in paths:
        path = normalize_path(raw)
        if path is None:
            result.reasons.append((raw, REASON_INVALID))
            continue

        if snapshot is not None and path in snapshot:
            if path in alias:
                _LOGGER.warning("Snapshot precedence: %s exists at Y and is an alias key", path)
            result.reasons.append((raw, REASON_DIRECT))
            keep(path)
            continue

        resolution = resolve(alias, path)
        if resolution.kind == Resolution.DELETED:
            result.reasons.append((raw, REASON_ALIAS_DELETED))
        elif resolution.kind == Resolution.RENAMED:
            result.reasons.append((raw, REASON_ALIAS_RENAME))
            if snapshot is None or resolution.path in snapshot:
                keep(resolution.path)
        elif snapshot is None:
            result.reasons.append((raw, REASON_DIRECT))
            keep(path)
        elif rescue:
            result.reasons.append((raw, rescue_classify(path, snapshot)))
        else:
            result.reasons.append((raw, REASON_UNKNOWN))

    return result
